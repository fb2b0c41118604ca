use crate::srl::{parse_corpus, SrlSentence};

pub const CANONICAL: &str = r#"{"tokens":[{"text":"In","pos":"IN"},{"text":"the","pos":"DT"},{"text":"operating","pos":"NN"},{"text":"room","pos":"NN"},{"text":",","pos":","},{"text":"the","pos":"DT"},{"text":"doctor","pos":"NN"},{"text":"comforted","pos":"VBD","lemma":"comfort"},{"text":"the","pos":"DT"},{"text":"athlete","pos":"NN"},{"text":".","pos":"."}],"frames":[{"verb_index":7,"args":[{"tag":"ARGM-LOC","start":0,"end":4},{"tag":"ARG0","start":5,"end":7},{"tag":"ARG1","start":8,"end":10}]}],"chunks":[[1,4],[5,7],[8,10]]}"#;

pub fn canonical() -> SrlSentence {
    parse_corpus(CANONICAL).unwrap().sentences.remove(0)
}

pub fn sentence(line: &str) -> SrlSentence {
    parse_corpus(line).unwrap().sentences.remove(0)
}
