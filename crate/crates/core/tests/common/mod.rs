#![allow(dead_code)]

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tailor_core::dsl::{Clause, OpProgram, PerturbOp, Scope};
use tailor_core::prompt::{ArgCode, ContextItem, Header, PromptSpec, VerbCode};
use tailor_core::srl::{parse_corpus, Keyword, RoleLabel, Specificity, SrlSentence, Tense, Voice};

pub const CANONICAL: &str = r#"{"tokens":[{"text":"In","pos":"IN"},{"text":"the","pos":"DT"},{"text":"operating","pos":"NN"},{"text":"room","pos":"NN"},{"text":",","pos":","},{"text":"the","pos":"DT"},{"text":"doctor","pos":"NN"},{"text":"comforted","pos":"VBD","lemma":"comfort"},{"text":"the","pos":"DT"},{"text":"athlete","pos":"NN"},{"text":".","pos":"."}],"frames":[{"verb_index":7,"args":[{"tag":"ARGM-LOC","start":0,"end":4},{"tag":"ARG0","start":5,"end":7},{"tag":"ARG1","start":8,"end":10}]}],"chunks":[[1,4],[5,7],[8,10]]}"#;

pub fn canonical() -> SrlSentence {
    parse_corpus(CANONICAL).unwrap().sentences.remove(0)
}

pub fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const VOICES: [Voice; 2] = [Voice::Active, Voice::Passive];
const TENSES: [Tense; 3] = [Tense::Past, Tense::Present, Tense::Future];
const SPECS: [Specificity; 3] = [Specificity::Complete, Specificity::Partial, Specificity::Sparse];

const ROLES: [RoleLabel; 12] = [
    RoleLabel::Agent,
    RoleLabel::Patient,
    RoleLabel::Temporal,
    RoleLabel::Locative,
    RoleLabel::Manner,
    RoleLabel::Cause,
    RoleLabel::Extent,
    RoleLabel::Purpose,
    RoleLabel::Goal,
    RoleLabel::Adverbial,
    RoleLabel::Direction,
    RoleLabel::Comitative,
];

pub const LEMMAS: [&str; 12] = ["comfort", "see", "go", "carry", "watch", "write", "take", "stop", "try", "make", "run", "build"];

const WORDS: [&str; 16] = [
    "the",
    "doctor",
    "athlete",
    "in",
    "room",
    "a",
    "big",
    "red",
    "house",
    "yesterday",
    "quickly",
    "because",
    "of",
    "rain",
    "to",
    "Paris",
];

/// Awkward but legal material for the wire format: punctuation, colons,
/// plus signs, near-sentinels, unicode.
const ODD: [&str; 10] = [",", ".", "a:b", "x+y", "<extra_id_01>", "<extra>", "*x", "naïve", "can't", "(paren)"];

fn word<R: Rng>(rng: &mut R) -> String {
    if rng.gen_bool(0.15) {
        ODD.choose(rng).unwrap().to_string()
    } else {
        WORDS.choose(rng).unwrap().to_string()
    }
}

fn phrase<R: Rng>(rng: &mut R, max: usize) -> String {
    let n = rng.gen_range(1..=max);
    (0..n).map(|_| word(rng)).collect::<Vec<_>>().join(" ")
}

fn role<R: Rng>(rng: &mut R) -> RoleLabel {
    if rng.gen_bool(0.05) {
        RoleLabel::other(["ARG2", "ARG3", "ARG4"].choose(rng).unwrap())
    } else {
        ROLES.choose(rng).unwrap().clone()
    }
}

fn keyword<R: Rng>(rng: &mut R) -> Keyword {
    if rng.gen_bool(0.2) {
        Keyword::Any
    } else {
        Keyword::text(phrase(rng, 4), *SPECS.choose(rng).unwrap())
    }
}

/// Any prompt the wire grammar can express, in wire form (no owners, no
/// source). Roles may repeat and blank counts are arbitrary.
pub fn wire_prompt<R: Rng>(rng: &mut R) -> PromptSpec {
    let verb = VerbCode {
        voice: *VOICES.choose(rng).unwrap(),
        tense: *TENSES.choose(rng).unwrap(),
        lemma: if rng.gen_bool(0.1) { phrase(rng, 2) } else { LEMMAS.choose(rng).unwrap().to_string() },
    };
    let args = (0..rng.gen_range(0..5)).map(|_| ArgCode::new(role(rng), keyword(rng))).collect();
    let context = (0..rng.gen_range(0..12))
        .map(|_| if rng.gen_bool(0.4) { ContextItem::blank() } else { ContextItem::literal(word(rng)) })
        .collect();
    PromptSpec { header: Header { verb, args }, context, source: None }
}

/// A well-formed prompt for generation: distinct roles, plain words, at
/// least one blank per code, literals only from a small vocabulary.
pub fn valid_prompt<R: Rng>(rng: &mut R) -> PromptSpec {
    let verb = VerbCode {
        voice: *VOICES.choose(rng).unwrap(),
        tense: *TENSES.choose(rng).unwrap(),
        lemma: LEMMAS.choose(rng).unwrap().to_string(),
    };
    let mut roles: Vec<RoleLabel> = ROLES.to_vec();
    roles.shuffle(rng);
    let n = rng.gen_range(0..5);
    let mut chosen: Vec<RoleLabel> = roles.into_iter().take(n).collect();
    // canonical order: AGENT, PATIENT, then adjuncts
    chosen.sort_by_key(|r| match r {
        RoleLabel::Agent => 0,
        RoleLabel::Patient => 1,
        _ => 2,
    });
    let args: Vec<ArgCode> = chosen
        .into_iter()
        .map(|r| {
            let kw = if rng.gen_bool(0.2) {
                Keyword::Any
            } else {
                let n = rng.gen_range(1..4);
                let words: Vec<&str> = (0..n).map(|_| *WORDS.choose(rng).unwrap()).collect();
                Keyword::text(words.join(" "), *SPECS.choose(rng).unwrap())
            };
            ArgCode::new(r, kw)
        })
        .collect();
    let blanks = args.len() + 1 + rng.gen_range(0..3);
    let mut context: Vec<ContextItem> = (0..blanks).map(|_| ContextItem::blank()).collect();
    for _ in 0..rng.gen_range(0..4) {
        let at = rng.gen_range(0..=context.len());
        context.insert(at, ContextItem::literal(*[",", "and", "then", "so"].choose(rng).unwrap()));
    }
    if rng.gen_bool(0.5) {
        context.push(ContextItem::literal("."));
    }
    PromptSpec { header: Header { verb, args }, context, source: None }
}

fn dsl_text<R: Rng>(rng: &mut R) -> String {
    // contents may carry the characters the DSL escapes
    let extras = ["(x)", "a\\b", "f(", ")"];
    let mut words: Vec<String> = (0..rng.gen_range(1..4)).map(|_| WORDS.choose(rng).unwrap().to_string()).collect();
    if rng.gen_bool(0.2) {
        words.push(extras.choose(rng).unwrap().to_string());
    }
    words.join(" ")
}

/// Any program the grammar accepts: at least one op per clause, role ops
/// only in role clauses, each role deleted at most once.
pub fn program<R: Rng>(rng: &mut R) -> OpProgram {
    let mut deleted: Vec<RoleLabel> = Vec::new();
    let mut clauses = Vec::new();
    for _ in 0..rng.gen_range(1..4) {
        if rng.gen_bool(0.4) {
            let ops = (0..rng.gen_range(1..4))
                .map(|_| match rng.gen_range(0..6) {
                    0 => PerturbOp::ChangeVTense(*TENSES.choose(rng).unwrap()),
                    1 => PerturbOp::ChangeVVoice(*VOICES.choose(rng).unwrap()),
                    2 => PerturbOp::ChangeVLemma(LEMMAS.choose(rng).unwrap().to_string()),
                    3 => PerturbOp::SwapCore,
                    4 => PerturbOp::ChangeIdx { from: rng.gen_range(0..20), to: rng.gen_range(0..20) },
                    _ => PerturbOp::ContextDeleteText(if rng.gen_bool(0.5) {
                        None
                    } else {
                        let a = rng.gen_range(0..10);
                        Some((a, a + rng.gen_range(0..5)))
                    }),
                })
                .collect();
            clauses.push(Clause { scope: Scope::Global, ops });
        } else {
            let r = role(rng);
            let mut ops = Vec::new();
            for _ in 0..rng.gen_range(1..4) {
                let op = match rng.gen_range(0..5) {
                    0 => PerturbOp::Move(if rng.gen_bool(0.5) { None } else { Some(rng.gen_range(0..20)) }),
                    1 => PerturbOp::ChangeContent(if rng.gen_bool(0.1) { "*".into() } else { dsl_text(rng) }),
                    2 => PerturbOp::ChangeSpec(*SPECS.choose(rng).unwrap()),
                    _ if !deleted.contains(&r) => {
                        deleted.push(r.clone());
                        PerturbOp::Delete
                    }
                    _ => PerturbOp::ChangeSpec(Specificity::Partial),
                };
                ops.push(op);
            }
            clauses.push(Clause { scope: Scope::Role(r), ops });
        }
    }
    OpProgram { clauses }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Move {
    Diag,
    Del,
    Ins,
}

fn flags_from_path(original: &[&str], edited: &[&str], path: &[Move]) -> Vec<bool> {
    let mut flags = vec![false; original.len()];
    let (mut i, mut j) = (original.len(), edited.len());
    for m in path {
        match m {
            Move::Diag => {
                flags[i - 1] = original[i - 1] != edited[j - 1];
                i -= 1;
                j -= 1;
            }
            Move::Del => {
                flags[i - 1] = true;
                i -= 1;
            }
            Move::Ins => j -= 1,
        }
    }
    flags
}

/// Brute-force token alignment: enumerates every edit script from the end
/// of both sequences, keeps the cheapest, and among those the one whose
/// moves read from the end are smallest under diagonal < delete < insert.
/// Exponential; meant for sequences of a handful of tokens.
pub fn brute_force_flags(original: &[&str], edited: &[&str]) -> Vec<bool> {
    fn walk(
        o: &[&str],
        e: &[&str],
        (i, j): (usize, usize),
        cost: usize,
        path: &mut Vec<Move>,
        best: &mut Option<(usize, Vec<Move>)>,
    ) {
        if i == 0 && j == 0 {
            let better = match best {
                None => true,
                Some((c, p)) => cost < *c || (cost == *c && path < p),
            };
            if better {
                *best = Some((cost, path.clone()));
            }
            return;
        }
        if i > 0 && j > 0 {
            path.push(Move::Diag);
            walk(o, e, (i - 1, j - 1), cost + usize::from(o[i - 1] != e[j - 1]), path, best);
            path.pop();
        }
        if i > 0 {
            path.push(Move::Del);
            walk(o, e, (i - 1, j), cost + 1, path, best);
            path.pop();
        }
        if j > 0 {
            path.push(Move::Ins);
            walk(o, e, (i, j - 1), cost + 1, path, best);
            path.pop();
        }
    }
    let mut best = None;
    walk(original, edited, (original.len(), edited.len()), 0, &mut Vec::new(), &mut best);
    flags_from_path(original, edited, &best.unwrap().1)
}

/// The same selection as [`brute_force_flags`] by top-down search with
/// memoized subproblems: the best script for a prefix pair is the cheapest,
/// then the lexicographically smallest, so it composes. Scales to
/// sentence-length inputs.
pub fn memo_flags(original: &[&str], edited: &[&str]) -> Vec<bool> {
    type Memo = HashMap<(usize, usize), (usize, Vec<Move>)>;
    fn best(o: &[&str], e: &[&str], i: usize, j: usize, memo: &mut Memo) -> (usize, Vec<Move>) {
        if i == 0 && j == 0 {
            return (0, Vec::new());
        }
        if let Some(v) = memo.get(&(i, j)) {
            return v.clone();
        }
        let mut moves = Vec::new();
        if i > 0 && j > 0 {
            moves.push((Move::Diag, usize::from(o[i - 1] != e[j - 1]), i - 1, j - 1));
        }
        if i > 0 {
            moves.push((Move::Del, 1, i - 1, j));
        }
        if j > 0 {
            moves.push((Move::Ins, 1, i, j - 1));
        }
        let winner = moves
            .into_iter()
            .map(|(m, step, ni, nj)| {
                let (c, rest) = best(o, e, ni, nj, memo);
                let mut path = vec![m];
                path.extend(rest);
                (c + step, path)
            })
            .min()
            .unwrap();
        memo.insert((i, j), winner.clone());
        winner
    }
    let (_, path) = best(original, edited, original.len(), edited.len(), &mut HashMap::new());
    flags_from_path(original, edited, &path)
}

/// Closeness recomputed from scratch: each span is (start, end, expected);
/// a span changed when at least half its tokens did.
pub fn brute_force_closeness(flags: &[bool], spans: &[(usize, usize, bool)]) -> (f64, f64, f64) {
    let mut tp = 0.0;
    let mut changed_total = 0.0;
    let mut expected_total = 0.0;
    for &(s, e, expected) in spans {
        let n = (e - s) as f64;
        let hits = flags[s..e].iter().filter(|f| **f).count() as f64;
        let changed = hits * 2.0 >= n;
        if changed {
            changed_total += n;
        }
        if expected {
            expected_total += n;
        }
        if changed && expected {
            tp += n;
        }
    }
    if changed_total == 0.0 && expected_total == 0.0 {
        return (1.0, 1.0, 1.0);
    }
    let p = if changed_total == 0.0 { 0.0 } else { tp / changed_total };
    let r = if expected_total == 0.0 { 0.0 } else { tp / expected_total };
    let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    (p, r, f)
}

/// Lowercased words with punctuation and the mock's filler words removed,
/// for comparing realizations against reference sentences.
pub fn normalize_realization(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric() && c != '\'').to_lowercase())
        .filter(|w| !w.is_empty() && !tailor_core::clients::FILLER.contains(&w.as_str()))
        .collect()
}
