//! English verb morphology for realization and lightweight analysis.
//!
//! Covers the common irregular verbs plus the usual spelling rules for
//! regular ones. It is used by the mock generator to conjugate coded verbs
//! and by the controllability metric to read voice and tense back.

use crate::srl::{Tense, Voice};

/// (base, past, past participle)
const IRREGULAR: &[(&str, &str, &str)] = &[
    ("arise", "arose", "arisen"),
    ("awake", "awoke", "awoken"),
    ("bear", "bore", "borne"),
    ("beat", "beat", "beaten"),
    ("become", "became", "become"),
    ("begin", "began", "begun"),
    ("bend", "bent", "bent"),
    ("bet", "bet", "bet"),
    ("bind", "bound", "bound"),
    ("bite", "bit", "bitten"),
    ("bleed", "bled", "bled"),
    ("blow", "blew", "blown"),
    ("break", "broke", "broken"),
    ("breed", "bred", "bred"),
    ("bring", "brought", "brought"),
    ("build", "built", "built"),
    ("burst", "burst", "burst"),
    ("buy", "bought", "bought"),
    ("cast", "cast", "cast"),
    ("catch", "caught", "caught"),
    ("choose", "chose", "chosen"),
    ("cling", "clung", "clung"),
    ("come", "came", "come"),
    ("cost", "cost", "cost"),
    ("creep", "crept", "crept"),
    ("cut", "cut", "cut"),
    ("deal", "dealt", "dealt"),
    ("dig", "dug", "dug"),
    ("do", "did", "done"),
    ("draw", "drew", "drawn"),
    ("drink", "drank", "drunk"),
    ("drive", "drove", "driven"),
    ("eat", "ate", "eaten"),
    ("fall", "fell", "fallen"),
    ("feed", "fed", "fed"),
    ("feel", "felt", "felt"),
    ("fight", "fought", "fought"),
    ("find", "found", "found"),
    ("flee", "fled", "fled"),
    ("fly", "flew", "flown"),
    ("forbid", "forbade", "forbidden"),
    ("forget", "forgot", "forgotten"),
    ("forgive", "forgave", "forgiven"),
    ("freeze", "froze", "frozen"),
    ("get", "got", "gotten"),
    ("give", "gave", "given"),
    ("go", "went", "gone"),
    ("grind", "ground", "ground"),
    ("grow", "grew", "grown"),
    ("hang", "hung", "hung"),
    ("have", "had", "had"),
    ("hear", "heard", "heard"),
    ("hide", "hid", "hidden"),
    ("hit", "hit", "hit"),
    ("hold", "held", "held"),
    ("hurt", "hurt", "hurt"),
    ("keep", "kept", "kept"),
    ("kneel", "knelt", "knelt"),
    ("know", "knew", "known"),
    ("lay", "laid", "laid"),
    ("lead", "led", "led"),
    ("leave", "left", "left"),
    ("lend", "lent", "lent"),
    ("let", "let", "let"),
    ("lie", "lay", "lain"),
    ("light", "lit", "lit"),
    ("lose", "lost", "lost"),
    ("make", "made", "made"),
    ("mean", "meant", "meant"),
    ("meet", "met", "met"),
    ("pay", "paid", "paid"),
    ("put", "put", "put"),
    ("quit", "quit", "quit"),
    ("read", "read", "read"),
    ("ride", "rode", "ridden"),
    ("ring", "rang", "rung"),
    ("rise", "rose", "risen"),
    ("run", "ran", "run"),
    ("say", "said", "said"),
    ("see", "saw", "seen"),
    ("seek", "sought", "sought"),
    ("sell", "sold", "sold"),
    ("send", "sent", "sent"),
    ("set", "set", "set"),
    ("shake", "shook", "shaken"),
    ("shine", "shone", "shone"),
    ("shoot", "shot", "shot"),
    ("show", "showed", "shown"),
    ("shrink", "shrank", "shrunk"),
    ("shut", "shut", "shut"),
    ("sing", "sang", "sung"),
    ("sink", "sank", "sunk"),
    ("sit", "sat", "sat"),
    ("sleep", "slept", "slept"),
    ("slide", "slid", "slid"),
    ("speak", "spoke", "spoken"),
    ("spend", "spent", "spent"),
    ("spin", "spun", "spun"),
    ("split", "split", "split"),
    ("spread", "spread", "spread"),
    ("spring", "sprang", "sprung"),
    ("stand", "stood", "stood"),
    ("steal", "stole", "stolen"),
    ("stick", "stuck", "stuck"),
    ("sting", "stung", "stung"),
    ("stink", "stank", "stunk"),
    ("strike", "struck", "struck"),
    ("swear", "swore", "sworn"),
    ("sweep", "swept", "swept"),
    ("swim", "swam", "swum"),
    ("swing", "swung", "swung"),
    ("take", "took", "taken"),
    ("teach", "taught", "taught"),
    ("tear", "tore", "torn"),
    ("tell", "told", "told"),
    ("think", "thought", "thought"),
    ("throw", "threw", "thrown"),
    ("understand", "understood", "understood"),
    ("wake", "woke", "woken"),
    ("wear", "wore", "worn"),
    ("weep", "wept", "wept"),
    ("win", "won", "won"),
    ("wind", "wound", "wound"),
    ("withdraw", "withdrew", "withdrawn"),
    ("write", "wrote", "written"),
];

const VOWELS: &[char] = &['a', 'e', 'i', 'o', 'u'];

/// Grammatical person/number of a clause subject, as far as agreement goes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Person {
    FirstSingular,
    ThirdSingular,
    Plural,
}

const PLURAL_WORDS: &[&str] = &[
    "we", "they", "you", "people", "children", "men", "women", "police", "these", "those", "both", "many", "several", "few",
    "us", "them", "feet", "teeth", "mice", "geese",
];
const SINGULAR_S_ENDINGS: &[&str] = &["ss", "us", "is", "ics", "news"];

/// Guesses agreement for a subject phrase from its head (last) word.
pub fn subject_person(phrase: &str) -> Person {
    let lower = phrase.to_lowercase();
    let words: Vec<&str> = lower.split_whitespace().collect();
    let Some(&head) = words.last() else { return Person::ThirdSingular };
    if words.len() == 1 && head == "i" {
        return Person::FirstSingular;
    }
    if words.contains(&"and") || PLURAL_WORDS.contains(&head) {
        return Person::Plural;
    }
    let looks_plural = head.len() > 2
        && head.ends_with('s')
        && !SINGULAR_S_ENDINGS.iter().any(|e| head.ends_with(e))
        && head.chars().all(|c| c.is_alphabetic());
    if looks_plural {
        Person::Plural
    } else {
        Person::ThirdSingular
    }
}

fn irregular(lemma: &str) -> Option<&'static (&'static str, &'static str, &'static str)> {
    IRREGULAR.iter().find(|(b, _, _)| *b == lemma)
}

fn is_consonant(c: char) -> bool {
    c.is_ascii_alphabetic() && !VOWELS.contains(&c)
}

/// Short consonant-vowel-consonant stems double their final consonant
/// before a vowel suffix (stop -> stopped).
fn doubles_final(lemma: &str) -> bool {
    let chars: Vec<char> = lemma.chars().collect();
    let n = chars.len();
    if !(3..=4).contains(&n) {
        return false;
    }
    let vowel_groups = chars.windows(2).filter(|w| !VOWELS.contains(&w[0]) && VOWELS.contains(&w[1])).count()
        + usize::from(VOWELS.contains(&chars[0]));
    vowel_groups == 1
        && is_consonant(chars[n - 1])
        && !matches!(chars[n - 1], 'w' | 'x' | 'y')
        && VOWELS.contains(&chars[n - 2])
        && is_consonant(chars[n - 3])
}

fn regular_ed(lemma: &str) -> String {
    if lemma.ends_with('e') {
        format!("{lemma}d")
    } else if let Some(stem) = lemma.strip_suffix('y').filter(|s| s.ends_with(is_consonant)) {
        format!("{stem}ied")
    } else if doubles_final(lemma) {
        format!("{lemma}{}ed", lemma.chars().last().unwrap())
    } else {
        format!("{lemma}ed")
    }
}

pub fn past(lemma: &str) -> String {
    match lemma {
        "be" => "was".into(),
        _ => irregular(lemma).map(|(_, p, _)| p.to_string()).unwrap_or_else(|| regular_ed(lemma)),
    }
}

pub fn past_participle(lemma: &str) -> String {
    match lemma {
        "be" => "been".into(),
        _ => irregular(lemma).map(|(_, _, pp)| pp.to_string()).unwrap_or_else(|| regular_ed(lemma)),
    }
}

pub fn third_singular(lemma: &str) -> String {
    match lemma {
        "be" => "is".into(),
        "have" => "has".into(),
        "do" => "does".into(),
        "go" => "goes".into(),
        _ => {
            if ["s", "x", "z", "ch", "sh", "o"].iter().any(|e| lemma.ends_with(e)) {
                format!("{lemma}es")
            } else if let Some(stem) = lemma.strip_suffix('y').filter(|s| s.ends_with(is_consonant)) {
                format!("{stem}ies")
            } else {
                format!("{lemma}s")
            }
        }
    }
}

pub fn present_participle(lemma: &str) -> String {
    if lemma == "be" {
        return "being".into();
    }
    if let Some(stem) = lemma.strip_suffix("ie") {
        return format!("{stem}ying");
    }
    if lemma.ends_with('e') && !lemma.ends_with("ee") && lemma.len() > 2 {
        return format!("{}ing", &lemma[..lemma.len() - 1]);
    }
    if doubles_final(lemma) {
        return format!("{lemma}{}ing", lemma.chars().last().unwrap());
    }
    format!("{lemma}ing")
}

fn be_present(person: Person) -> &'static str {
    match person {
        Person::FirstSingular => "am",
        Person::ThirdSingular => "is",
        Person::Plural => "are",
    }
}

fn be_past(person: Person) -> &'static str {
    match person {
        Person::Plural => "were",
        _ => "was",
    }
}

fn finite_present(lemma: &str, person: Person) -> String {
    match (lemma, person) {
        ("be", p) => be_present(p).to_string(),
        (_, Person::ThirdSingular) => third_singular(lemma),
        _ => lemma.to_string(),
    }
}

fn finite_past(lemma: &str, person: Person) -> String {
    match lemma {
        "be" => be_past(person).to_string(),
        _ => past(lemma),
    }
}

/// Realizes a verb group for `(lemma, voice, tense)` agreeing with a
/// subject of the given person. Multi-word lemmas inflect their first word
/// (`pick up` -> `picked up`).
pub fn conjugate(lemma: &str, voice: Voice, tense: Tense, person: Person) -> String {
    let lemma = lemma.trim();
    let (head, rest) = match lemma.split_once(' ') {
        Some((h, r)) => (h.to_lowercase(), format!(" {r}")),
        None => (lemma.to_lowercase(), String::new()),
    };
    let group = match (voice, tense) {
        (Voice::Active, Tense::Present) => finite_present(&head, person),
        (Voice::Active, Tense::Past) => finite_past(&head, person),
        (Voice::Active, Tense::Future) => format!("will {head}"),
        (Voice::Passive, Tense::Present) => format!("{} {}", be_present(person), past_participle(&head)),
        (Voice::Passive, Tense::Past) => format!("{} {}", be_past(person), past_participle(&head)),
        (Voice::Passive, Tense::Future) => format!("will be {}", past_participle(&head)),
    };
    format!("{group}{rest}")
}

const BE_WORDS: &[&str] = &["am", "is", "are", "was", "were", "be", "been", "being", "'s", "'re", "'m"];
const PAST_AUX: &[&str] = &["was", "were", "had", "did"];
const FUTURE_AUX: &[&str] = &["will", "shall", "'ll", "wo"];

/// Reading of a surface verb group against an expected lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerbReading {
    pub lemma_ok: bool,
    pub voice: Voice,
    pub tense: Tense,
}

/// Reads lemma agreement, voice and tense off a verb group such as
/// `was comforted` or `will be watching`, given the lemma it should carry.
/// Mirrors the tagger-based rules used at ingestion, with morphology
/// standing in for part-of-speech tags.
pub fn read_verb_group(words: &[&str], lemma: &str) -> Option<VerbReading> {
    let words: Vec<String> = words.iter().map(|w| w.to_lowercase()).collect();
    let lemma_words: Vec<String> = lemma.split_whitespace().map(str::to_lowercase).collect();
    let head_lemma = lemma_words.first()?.clone();
    let particle_len = lemma_words.len() - 1;
    if words.len() < 1 + particle_len {
        return None;
    }
    let particles_ok = words[words.len() - particle_len..] == lemma_words[1..];
    let verb_pos = words.len() - 1 - particle_len;
    let main = &words[verb_pos];
    let aux = &words[..verb_pos];

    let pp = past_participle(&head_lemma);
    let forms = [head_lemma.clone(), third_singular(&head_lemma), past(&head_lemma), pp.clone(), present_participle(&head_lemma)];
    let is_be_lemma = head_lemma == "be";
    let lemma_ok = particles_ok && (forms.contains(main) || (is_be_lemma && BE_WORDS.contains(&main.as_str())));

    let has_be_aux = aux.iter().any(|w| BE_WORDS.contains(&w.as_str()));
    let voice = if has_be_aux && *main == pp && !is_be_lemma { Voice::Passive } else { Voice::Active };

    let going_to = aux.windows(2).any(|w| w[0] == "going" && w[1] == "to");
    let tense = if aux.iter().any(|w| FUTURE_AUX.contains(&w.as_str())) || going_to {
        Tense::Future
    } else if let Some(first) = aux.first() {
        if PAST_AUX.contains(&first.as_str()) {
            Tense::Past
        } else {
            Tense::Present
        }
    } else if *main == past(&head_lemma) || (is_be_lemma && (main == "was" || main == "were")) {
        Tense::Past
    } else {
        Tense::Present
    };
    Some(VerbReading { lemma_ok, voice, tense })
}

/// Best-effort lemma for a single inflected verb form.
pub fn lemmatize(word: &str) -> String {
    let w = word.to_lowercase();
    if BE_WORDS.contains(&w.as_str()) {
        return "be".into();
    }
    if let Some((base, _, _)) = IRREGULAR.iter().find(|(b, p, pp)| *b == w || *p == w || *pp == w) {
        return base.to_string();
    }
    match w.as_str() {
        "has" => return "have".into(),
        "does" => return "do".into(),
        "goes" => return "go".into(),
        _ => {}
    }
    for suffix in ["ied", "ies"] {
        if let Some(stem) = w.strip_suffix(suffix) {
            return format!("{stem}y");
        }
    }
    for suffix in ["ed", "ing"] {
        if let Some(stem) = w.strip_suffix(suffix).filter(|s| s.len() >= 2) {
            let chars: Vec<char> = stem.chars().collect();
            let n = chars.len();
            if n >= 2 && chars[n - 1] == chars[n - 2] && !matches!(chars[n - 1], 'l' | 's' | 'z' | 'f') {
                return stem[..stem.len() - 1].to_string();
            }
            // stems that lost a silent e: compar(e)d, mak(e)ing
            let silent_e = n >= 2
                && is_consonant(chars[n - 1])
                && VOWELS.contains(&chars[n - 2])
                && !(n >= 3 && VOWELS.contains(&chars[n - 3]))
                && !matches!(chars[n - 1], 'r' | 'n' | 'w' | 'x' | 'y' | 't' | 'l' | 'm' | 'p');
            return if silent_e || stem.ends_with('v') || stem.ends_with("rg") || stem.ends_with("dg") {
                format!("{stem}e")
            } else {
                stem.to_string()
            };
        }
    }
    for suffix in ["ches", "shes", "sses", "xes", "zes", "oes"] {
        if w.ends_with(suffix) {
            return w[..w.len() - 2].to_string();
        }
    }
    if let Some(stem) = w.strip_suffix('s').filter(|s| !s.ends_with('s') && s.len() >= 2) {
        return stem.to_string();
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_forms() {
        assert_eq!(past("comfort"), "comforted");
        assert_eq!(past("stop"), "stopped");
        assert_eq!(past("carry"), "carried");
        assert_eq!(past("like"), "liked");
        assert_eq!(third_singular("watch"), "watches");
        assert_eq!(third_singular("carry"), "carries");
        assert_eq!(present_participle("make"), "making");
        assert_eq!(present_participle("run"), "running");
    }

    #[test]
    fn table_of_conjugations() {
        use Person::*;
        assert_eq!(conjugate("comfort", Voice::Active, Tense::Past, ThirdSingular), "comforted");
        assert_eq!(conjugate("comfort", Voice::Active, Tense::Present, ThirdSingular), "comforts");
        assert_eq!(conjugate("comfort", Voice::Active, Tense::Future, ThirdSingular), "will comfort");
        assert_eq!(conjugate("comfort", Voice::Passive, Tense::Past, ThirdSingular), "was comforted");
        assert_eq!(conjugate("see", Voice::Passive, Tense::Past, Plural), "were seen");
        assert_eq!(conjugate("see", Voice::Passive, Tense::Future, Plural), "will be seen");
        assert_eq!(conjugate("prefer", Voice::Active, Tense::Present, Plural), "prefer");
        assert_eq!(conjugate("be", Voice::Active, Tense::Present, FirstSingular), "am");
        assert_eq!(conjugate("pick up", Voice::Active, Tense::Past, Plural), "picked up");
    }

    #[test]
    fn readings_invert_conjugation() {
        for lemma in ["comfort", "see", "watch", "be", "have", "carry", "stop", "pick up", "go"] {
            for voice in [Voice::Active, Voice::Passive] {
                if lemma == "be" && voice == Voice::Passive {
                    continue;
                }
                for tense in Tense::ALL {
                    for person in [Person::FirstSingular, Person::ThirdSingular, Person::Plural] {
                        let group = conjugate(lemma, voice, tense, person);
                        let words: Vec<&str> = group.split(' ').collect();
                        let reading = read_verb_group(&words, lemma).unwrap();
                        assert_eq!(reading, VerbReading { lemma_ok: true, voice, tense }, "{group}");
                    }
                }
            }
        }
    }

    #[test]
    fn wrong_lemma_is_detected() {
        assert!(!read_verb_group(&["comforted"], "watch").unwrap().lemma_ok);
    }

    #[test]
    fn subject_agreement_guess() {
        assert_eq!(subject_person("the judges"), Person::Plural);
        assert_eq!(subject_person("the athlete"), Person::ThirdSingular);
        assert_eq!(subject_person("the bus"), Person::ThirdSingular);
        assert_eq!(subject_person("you"), Person::Plural);
        assert_eq!(subject_person("I"), Person::FirstSingular);
        assert_eq!(subject_person("ham and eggs"), Person::Plural);
    }

    #[test]
    fn lemmatize_common_forms() {
        assert_eq!(lemmatize("comforted"), "comfort");
        assert_eq!(lemmatize("saw"), "see");
        assert_eq!(lemmatize("watching"), "watch");
        assert_eq!(lemmatize("stopped"), "stop");
        assert_eq!(lemmatize("carried"), "carry");
        assert_eq!(lemmatize("was"), "be");
        assert_eq!(lemmatize("watches"), "watch");
        assert_eq!(lemmatize("called"), "call");
        assert_eq!(lemmatize("liked"), "like");
    }
}
