use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::mix_seed;
use crate::srl::{extract_keyword_candidates, Keyword, RoleLabel, Specificity, SrlSentence};

pub const TABLE_TOP_K: usize = 15;

/// Most frequent keyword contents per (role, specificity), plus the most
/// frequent predicate lemmas. Lists are sorted by count, descending, ties
/// lexicographic.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "TableWire", from = "TableWire")]
pub struct KeywordTable {
    pub entries: BTreeMap<(RoleLabel, Specificity), Vec<(String, u64)>>,
    pub lemmas: Vec<(String, u64)>,
}

#[derive(Serialize, Deserialize)]
struct EntryWire {
    role: RoleLabel,
    spec: Specificity,
    contents: Vec<(String, u64)>,
}

#[derive(Serialize, Deserialize)]
struct TableWire {
    entries: Vec<EntryWire>,
    lemmas: Vec<(String, u64)>,
}

impl From<KeywordTable> for TableWire {
    fn from(t: KeywordTable) -> Self {
        TableWire {
            entries: t.entries.into_iter().map(|((role, spec), contents)| EntryWire { role, spec, contents }).collect(),
            lemmas: t.lemmas,
        }
    }
}

impl From<TableWire> for KeywordTable {
    fn from(w: TableWire) -> Self {
        KeywordTable { entries: w.entries.into_iter().map(|e| ((e.role, e.spec), e.contents)).collect(), lemmas: w.lemmas }
    }
}

fn top_k(counts: HashMap<String, u64>) -> Vec<(String, u64)> {
    let mut v: Vec<(String, u64)> = counts.into_iter().collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v.truncate(TABLE_TOP_K);
    v
}

impl KeywordTable {
    pub fn contents(&self, role: &RoleLabel, spec: Specificity) -> &[(String, u64)] {
        self.entries.get(&(role.clone(), spec)).map_or(&[], Vec::as_slice)
    }
}

/// Counts keyword candidates over every argument of every frame. Each
/// argument contributes each distinct candidate once; `*` is not counted.
pub fn build_keyword_table(corpus: &[SrlSentence], seed: u64) -> KeywordTable {
    let mut counts: HashMap<(RoleLabel, Specificity), HashMap<String, u64>> = HashMap::new();
    let mut lemmas: HashMap<String, u64> = HashMap::new();
    for (si, sentence) in corpus.iter().enumerate() {
        for (fi, frame) in sentence.frames.iter().enumerate() {
            *lemmas.entry(frame.lemma.clone()).or_default() += 1;
            for (ai, arg) in frame.args.iter().enumerate() {
                let arg_seed = mix_seed(seed, &[si as u64, fi as u64, ai as u64]);
                for cand in extract_keyword_candidates(arg, sentence, arg_seed, true) {
                    if let Keyword::Text { content, spec } = cand {
                        *counts.entry((arg.role.clone(), spec)).or_default().entry(content).or_default() += 1;
                    }
                }
            }
        }
    }
    KeywordTable { entries: counts.into_iter().map(|(k, v)| (k, top_k(v))).collect(), lemmas: top_k(lemmas) }
}
