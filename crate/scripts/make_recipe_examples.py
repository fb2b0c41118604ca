"""Writes crates/core/tests/fixtures/recipe_examples.jsonl: worked recipe examples.

`reference` is the reference perturbed sentence; `mock` is what the mock
generator must produce. The acceptance check requires the mock text, with
punctuation and filler dropped, to be an in-order subsequence of `reference`.
"""
import json
from pathlib import Path


LEMMAS = {"has": "have", "is": "be", "does": "do", "did": "do", "said": "say", "watching": "watch", "be": "be"}


def toks(pairs):
    out = []
    for t in pairs:
        d = {"text": t[0], "pos": t[1]}
        if len(t) > 2:
            d["lemma"] = t[2]
        elif t[1].startswith("VB"):
            d["lemma"] = LEMMAS.get(t[0], t[0])
        out.append(d)
    return out


def arg(tag, s, e):
    return {"tag": tag, "start": s, "end": e}


relative = {
    "tokens": toks([("The", "DT"), ("athlete", "NN"), ("who", "WP"), ("was", "VBD"), ("seen", "VBN", "see"), ("by", "IN"), ("the", "DT"), ("judges", "NNS"), ("yesterday", "NN"), ("called", "VBD", "call"), ("the", "DT"), ("manager", "NN"), (".", ".")]),
    "frames": [
        {"verb_index": 4, "args": [arg("ARG1", 0, 2), arg("R-ARG1", 2, 3), arg("ARG0", 5, 8), arg("ARGM-TMP", 8, 9)]},
        {"verb_index": 9, "args": [arg("ARG0", 0, 9), arg("ARG1", 10, 12)]},
    ],
    "chunks": [[0, 2], [6, 8], [10, 12]],
}
relative_short = {
    "tokens": toks([("The", "DT"), ("athlete", "NN"), ("who", "WP"), ("was", "VBD"), ("seen", "VBN", "see"), ("by", "IN"), ("the", "DT"), ("judges", "NNS"), ("called", "VBD", "call"), ("the", "DT"), ("manager", "NN"), (".", ".")]),
    "frames": [
        {"verb_index": 4, "args": [arg("ARG1", 0, 2), arg("R-ARG1", 2, 3), arg("ARG0", 5, 8)]},
        {"verb_index": 8, "args": [arg("ARG0", 0, 8), arg("ARG1", 9, 11)]},
    ],
    "chunks": [[0, 2], [6, 8], [9, 11]],
}
judge = {
    "tokens": toks([("The", "DT"), ("judge", "NN"), ("behind", "IN"), ("the", "DT"), ("manager", "NN"), ("saw", "VBD", "see"), ("the", "DT"), ("doctors", "NNS"), (".", ".")]),
    "frames": [{"verb_index": 5, "args": [arg("ARG0", 0, 5), arg("ARG1", 6, 8)]}],
    "chunks": [[0, 2], [3, 5], [6, 8]],
}
no_patient = {
    "tokens": toks([("The", "DT"), ("athlete", "NN"), ("slept", "VBD", "sleep"), (".", ".")]),
    "frames": [{"verb_index": 2, "args": [arg("ARG0", 0, 2)]}],
}
deadpool = {
    "tokens": toks([("does", "VBZ"), ("Deadpool", "NNP"), ("have", "VB"), ("a", "DT"), ("kid", "NN"), ("in", "IN"), ("the", "DT"), ("comics", "NNS"), ("?", ".")]),
    "frames": [{"verb_index": 2, "args": [arg("ARG0", 1, 2), arg("ARG1", 3, 5), arg("ARGM-LOC", 5, 8)]}],
}
breakfast = {
    "tokens": toks([("Do", "VBP"), ("you", "PRP"), ("prefer", "VB"), ("ham", "NN"), ("or", "CC"), ("sausages", "NNS"), ("with", "IN"), ("your", "PRP$"), ("breakfast", "NN"), ("?", ".")]),
    "frames": [{"verb_index": 2, "args": [arg("ARG0", 1, 2), arg("ARG1", 3, 6), arg("ARGM-ADV", 6, 9)]}],
}
boutiques = {
    "tokens": toks([("It", "PRP"), ("has", "VBZ"), ("local", "JJ"), ("boutiques", "NNS"), ("and", "CC"), ("a", "DT"), ("diverse", "JJ"), ("range", "NN"), ("of", "IN"), ("food", "NN"), ("at", "IN"), ("all", "DT"), ("prices", "NNS"), ("and", "CC"), ("styles", "NNS"), (".", ".")]),
    "frames": [{"verb_index": 1, "args": [arg("ARG0", 0, 1), arg("ARG1", 2, 15)]}],
}
volleyball = {
    "tokens": toks([("Volleyball", "NN"), ("is", "VBZ"), ("a", "DT"), ("popular", "JJ"), ("sport", "NN"), ("in", "IN"), ("the", "DT"), ("area", "NN"), (",", ","),
                    ("and", "CC"), ("more", "JJR"), ("than", "IN"), ("200", "CD"), ("people", "NNS"), ("would", "MD"), ("be", "VB"), ("watching", "VBG"),
                    ("the", "DT"), ("game", "NN"), (",", ","), ("the", "DT"), ("chief", "NN"), ("said", "VBD"), (".", ".")]),
    "frames": [
        {"verb_index": 16, "args": [arg("ARG0", 10, 14), arg("ARGM-MOD", 14, 15), arg("ARG1", 17, 19)]},
        {"verb_index": 22, "args": [arg("ARG1", 0, 19), arg("ARG0", 20, 22)]},
    ],
}
huguenots = {
    "tokens": toks([("How", "WRB"), ("did", "VBD"), ("the", "DT"), ("Huguenots", "NNPS"), ("defend", "VB"), ("themselves", "PRP"), ("?", ".")]),
    "frames": [{"verb_index": 4, "args": [arg("ARGM-MNR", 0, 1), arg("ARG0", 2, 4), arg("ARG1", 5, 6)]}],
}

rows = [
    ("untangle", "untangle_relative_clause", "", 0, relative, "The athlete was seen by the judges yesterday", "The athlete was seen by the judges yesterday", "entailment"),
    ("shorten", "shorten_core", "", 1, relative, "The athlete called the manager.", "The athlete called the manager .", "entailment"),
    ("voice", "change_voice", "", 1, relative, "The manager was called by the athlete who was seen by the judges yesterday.", "The manager was called by the athlete who was seen by the judges yesterday .", "entailment"),
    ("replace", "replace_core_with_subsequences", "", 0, judge, "The doctors saw the manager.", "The doctors saw the manager .", "neutral"),
    ("swap", "swap_core", "", 0, relative_short, "The judges who were seen by the athlete called the manager.", "The judges who were seen by the athlete called the manager .", "neutral"),
    ("swap_inapplicable", "swap_core", "", None, no_patient, None, None, None),
    ("entity", "change_entity", "role=AGENT,text=his bride", 0, deadpool, "does his bride have a kid in the comics?", "does his bride have a kid in the comics ?", None),
    ("pp_noun", "pp_to_noun", "prep=with", 0, breakfast, "Do you prefer ham or sausages with bacon on them?", "Do you prefer ham or sausages with lorem ?", None),
    ("pp_verb", "pp_to_verb", "prep=at", 0, boutiques, "It has local boutiques and a diverse range of food at every turn.", "It has local boutiques and a diverse range of food at lorem .", None),
    ("matres_tense", "matres_change_tense", "tense=past", 0, volleyball, "Volleyball is a popular sport in the area, and more than 200 people watched the game, the chief said.", None, None),
    ("matres_order", "matres_change_order", "frame=1", 1, volleyball, "the chief said Volleyball is a popular sport in the area, and more than 200 people would be watching the game.", None, None),
    ("qa", "qa_swap_answer_to_agent", "answer=their own militia", 0, huguenots, "Who has defended themselves by setting up their own militia?", None, None),
]

out = Path(__file__).resolve().parent.parent / "crates/core/tests/fixtures/recipe_examples.jsonl"
with out.open("w") as f:
    for name, recipe, params, frame, sentence, reference, mock, label in rows:
        rec = {"name": name, "recipe": recipe, "params": params, "frame": frame, "sentence": sentence, "reference": reference}
        if mock is not None:
            rec["mock"] = mock
        if label is not None:
            rec["label"] = label
        f.write(json.dumps(rec) + "\n")
print(out)
