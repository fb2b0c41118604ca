"""Writes crates/core/tests/fixtures/corpus100.jsonl: 100 single-frame
sentences, each with AGENT, PATIENT and one adjunct, in active past,
active present, active future and passive past forms."""
import json
import random
import sys

rng = random.Random(7)

SUBJECTS = [("the", "nurse"), ("a", "farmer"), ("the", "pilot"), ("the", "teacher"), ("a", "student"),
            ("the", "chef"), ("the", "lawyer"), ("a", "painter"), ("the", "captain"), ("the", "baker")]
OBJECTS = [("the", "child"), ("a", "letter"), ("the", "bridge"), ("the", "report"), ("a", "horse"),
           ("the", "garden"), ("the", "window"), ("a", "song"), ("the", "car"), ("the", "contract")]
# lemma, past, present 3sg, past participle
VERBS = [("help", "helped", "helps", "helped"), ("paint", "painted", "paints", "painted"),
         ("carry", "carried", "carries", "carried"), ("clean", "cleaned", "cleans", "cleaned"),
         ("watch", "watched", "watches", "watched"), ("visit", "visited", "visits", "visited"),
         ("fix", "fixed", "fixes", "fixed"), ("check", "checked", "checks", "checked"),
         ("push", "pushed", "pushes", "pushed"), ("follow", "followed", "follows", "followed")]
ADJUNCTS = [("ARGM-LOC", ["in", "the", "kitchen"]), ("ARGM-LOC", ["at", "the", "station"]),
            ("ARGM-TMP", ["on", "Monday"]), ("ARGM-TMP", ["after", "the", "storm"]),
            ("ARGM-MNR", ["with", "great", "care"]), ("ARGM-LOC", ["near", "the", "old", "mill"]),
            ("ARGM-TMP", ["during", "the", "night"]), ("ARGM-MNR", ["in", "silence"])]
POS = {"the": "DT", "a": "DT", "in": "IN", "at": "IN", "on": "IN", "after": "IN", "with": "IN",
       "near": "IN", "during": "IN", "great": "JJ", "old": "JJ", "Monday": "NNP", "by": "IN",
       "was": "VBD", "will": "MD", ".": ".", ",": ","}


def tok(text, pos=None, lemma=None):
    t = {"text": text, "pos": pos or POS.get(text, "NN")}
    if lemma:
        t["lemma"] = lemma
    return t


def adjunct_chunk(words, start):
    # noun chunk: from the first non-preposition word to the end
    return [start + 1, start + len(words)]


def sentence(i):
    subj, obj = SUBJECTS[i % 10], OBJECTS[(i * 3 + i // 10) % 10]
    lemma, past, pres, part = VERBS[(i * 7 + i // 10) % 10]
    tag, adj = ADJUNCTS[rng.randrange(len(ADJUNCTS))]
    form = ["past", "present", "future", "passive"][i % 4]
    front = tag == "ARGM-TMP" and rng.random() < 0.5
    tokens, args, chunks = [], [], []

    def add(words, arg_tag=None, chunk=None):
        start = len(tokens)
        tokens.extend(tok(w) for w in words)
        if arg_tag:
            args.append({"tag": arg_tag, "start": start, "end": len(tokens)})
        if chunk:
            chunks.append([start + chunk[0], start + chunk[1]])
        return start

    if front:
        adj = [adj[0].capitalize()] + adj[1:]
        add(adj, tag, [1, len(adj)] if len(adj) > 1 else None)
        add([","])
    if form == "passive":
        add([obj[0], obj[1]], "ARG1", [0, 2])
        add(["was"])
        verb_index = len(tokens)
        tokens.append(tok(part, "VBN", lemma))
        add(["by", subj[0], subj[1]], "ARG0", [1, 3])
    else:
        add([subj[0], subj[1]], "ARG0", [0, 2])
        if form == "future":
            add(["will"])
            verb_index = len(tokens)
            tokens.append(tok(lemma, "VB", lemma))
        else:
            verb_index = len(tokens)
            surface, pos = (past, "VBD") if form == "past" else (pres, "VBZ")
            tokens.append(tok(surface, pos, lemma))
        add([obj[0], obj[1]], "ARG1", [0, 2])
    if not front:
        add(adj, tag, [1, len(adj)] if len(adj) > 1 else None)
    add(["."])
    if tokens[0]["text"].islower():
        tokens[0]["text"] = tokens[0]["text"].capitalize()
    chunks.sort()
    return {"tokens": tokens, "frames": [{"verb_index": verb_index, "args": args}], "chunks": chunks}


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "crates/core/tests/fixtures/corpus100.jsonl"
    with open(out, "w") as f:
        for i in range(100):
            f.write(json.dumps(sentence(i), separators=(",", ":")) + "\n")
