use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{validate_keyword, ArgCode, ContextItem, Header, Owner, PromptError, PromptSpec, SourceArg, SourceRef, VerbCode};
use crate::srl::{Keyword, PredicateFrame, RoleLabel, Specificity, SrlSentence};

/// Which arguments of the frame get blanked. The verb always is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MaskSpec {
    All,
    /// Every argument carrying one of these roles; each role must exist.
    Roles(Vec<RoleLabel>),
    /// Arguments by index into the frame.
    Args(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtraBlanks {
    /// Sampled (with replacement) from the eligible token boundaries.
    Count(usize),
    /// Explicit token boundaries; boundary `b` sits before token `b`.
    At(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompileOptions {
    pub mask: MaskSpec,
    pub extra: ExtraBlanks,
    /// Keyword per masked argument index. Missing entries default to the
    /// exact span text, complete.
    pub keywords: BTreeMap<usize, Keyword>,
    pub seed: u64,
}

impl CompileOptions {
    pub fn new(mask: MaskSpec) -> Self {
        CompileOptions { mask, extra: ExtraBlanks::Count(0), keywords: BTreeMap::new(), seed: 0 }
    }

    pub fn extra(mut self, extra: ExtraBlanks) -> Self {
        self.extra = extra;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn keyword(mut self, arg: usize, keyword: Keyword) -> Self {
        self.keywords.insert(arg, keyword);
        self
    }
}

fn masked_args(frame: &PredicateFrame, mask: &MaskSpec) -> Result<Vec<usize>, PromptError> {
    let mut out: Vec<usize> = match mask {
        MaskSpec::All => (0..frame.args.len()).collect(),
        MaskSpec::Roles(roles) => {
            let mut out = Vec::new();
            for role in roles {
                let hits: Vec<usize> = frame.args.iter().enumerate().filter(|(_, a)| &a.role == role).map(|(i, _)| i).collect();
                if hits.is_empty() {
                    return Err(PromptError::UnknownRole(role.clone()));
                }
                out.extend(hits);
            }
            out
        }
        MaskSpec::Args(idx) => {
            if let Some(&bad) = idx.iter().find(|&&i| i >= frame.args.len()) {
                return Err(PromptError::ArgOutOfRange(bad));
            }
            idx.clone()
        }
    };
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Token boundaries (`0..=n`) where an extra blank may be placed: not
/// strictly inside any argument span and not between the auxiliaries and
/// the predicate.
pub fn eligible_token_boundaries(sentence: &SrlSentence, frame: &PredicateFrame) -> Vec<usize> {
    let group = frame.verb_group();
    let (vmin, vmax) = (group[0], group[group.len() - 1]);
    (0..=sentence.len()).filter(|&b| !frame.args.iter().any(|a| a.start < b && b < a.end) && !(vmin < b && b <= vmax)).collect()
}

/// Builds a prompt for one frame of `sentence`.
///
/// The header lists the verb, masked AGENT and PATIENT codes, then masked
/// adjuncts in a seeded shuffle. Each masked span becomes one blank at its
/// position; the predicate and its auxiliaries collapse into one blank at
/// the predicate. Extra blanks are added at eligible token boundaries.
pub fn compile(sentence: &SrlSentence, frame_idx: usize, options: &CompileOptions) -> Result<PromptSpec, PromptError> {
    let frame = sentence.frames.get(frame_idx).ok_or(PromptError::FrameOutOfRange(frame_idx))?;
    let masked = masked_args(frame, &options.mask)?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);

    let mut codes = Vec::with_capacity(masked.len());
    for &i in &masked {
        let arg = &frame.args[i];
        let keyword = match options.keywords.get(&i) {
            Some(k) => k.clone(),
            None => Keyword::text(sentence.span_text(arg.start, arg.end), Specificity::Complete),
        };
        validate_keyword(&keyword)?;
        codes.push(ArgCode { role: arg.role.clone(), keyword, id: Some(i as u32) });
    }
    let mut header_args: Vec<ArgCode> = Vec::with_capacity(codes.len());
    header_args.extend(codes.iter().filter(|c| c.role == RoleLabel::Agent).cloned());
    header_args.extend(codes.iter().filter(|c| c.role == RoleLabel::Patient).cloned());
    let mut adjuncts: Vec<ArgCode> = codes.into_iter().filter(|c| !c.role.is_core()).collect();
    adjuncts.shuffle(&mut rng);
    header_args.extend(adjuncts);

    let eligible = eligible_token_boundaries(sentence, frame);
    let mut extras_at = vec![0usize; sentence.len() + 1];
    match &options.extra {
        ExtraBlanks::Count(k) => {
            for _ in 0..*k {
                extras_at[eligible[rng.gen_range(0..eligible.len())]] += 1;
            }
        }
        ExtraBlanks::At(bounds) => {
            for &b in bounds {
                if !eligible.contains(&b) {
                    return Err(PromptError::IneligibleBoundary(b));
                }
                extras_at[b] += 1;
            }
        }
    }

    let group = frame.verb_group();
    let mut context = Vec::new();
    for (b, &extras) in extras_at.iter().enumerate() {
        context.extend(std::iter::repeat_n(ContextItem::blank(), extras));
        if b == sentence.len() {
            break;
        }
        if group.contains(&b) {
            if b == frame.verb_index {
                context.push(ContextItem::Blank { owner: Some(Owner::Verb) });
            }
            continue;
        }
        if let Some(&i) = masked.iter().find(|&&i| frame.args[i].contains(b)) {
            if frame.args[i].start == b {
                context.push(ContextItem::Blank { owner: Some(Owner::Arg(i as u32)) });
            }
            continue;
        }
        context.push(ContextItem::Literal { text: sentence.tokens[b].text.clone(), token: Some(b) });
    }

    Ok(PromptSpec {
        header: Header {
            verb: VerbCode { voice: frame.voice, tense: frame.tense, lemma: frame.lemma.clone() },
            args: header_args,
        },
        context,
        source: Some(SourceRef {
            frame_idx,
            args: frame
                .args
                .iter()
                .enumerate()
                .map(|(i, a)| SourceArg { id: i as u32, role: a.role.clone(), start: a.start, end: a.end })
                .collect(),
            verb_group: group,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prompt::{build_target, serialize};
    use crate::testutil::canonical;

    // arg indices in the canonical frame: 0 LOCATIVE, 1 AGENT, 2 PATIENT
    #[test]
    fn mask_all_with_table_keywords() {
        let s = canonical();
        let opts = CompileOptions::new(MaskSpec::All)
            .keyword(0, Keyword::text("in", Specificity::Partial))
            .keyword(1, Keyword::text("the doctor", Specificity::Complete))
            .keyword(2, Keyword::text("athlete", Specificity::Partial));
        let p = compile(&s, 0, &opts).unwrap();
        assert_eq!(
            serialize(&p),
            "[VERB+active+past: comfort | AGENT+complete: the doctor | PATIENT+partial: athlete | LOCATIVE+partial: in] <extra_id_0> , <extra_id_1> <extra_id_2> <extra_id_3> ."
        );
        assert_eq!(
            build_target(&s, &p).unwrap(),
            "[LOCATIVE: In the operating room] , [AGENT: the doctor] [VERB: comforted] [PATIENT: the athlete] ."
        );
    }

    #[test]
    fn verb_only_mask() {
        let s = canonical();
        let p = compile(&s, 0, &CompileOptions::new(MaskSpec::Args(vec![]))).unwrap();
        assert_eq!(serialize(&p), "[VERB+active+past: comfort] In the operating room , the doctor <extra_id_0> the athlete .");
        assert_eq!(build_target(&s, &p).unwrap(), "In the operating room , the doctor [VERB: comforted] the athlete .");
    }

    #[test]
    fn unknown_role_and_bad_boundary() {
        let s = canonical();
        let err = compile(&s, 0, &CompileOptions::new(MaskSpec::Roles(vec![RoleLabel::Temporal]))).unwrap_err();
        assert_eq!(err, PromptError::UnknownRole(RoleLabel::Temporal));
        let err = compile(&s, 0, &CompileOptions::new(MaskSpec::All).extra(ExtraBlanks::At(vec![2]))).unwrap_err();
        assert_eq!(err, PromptError::IneligibleBoundary(2));
        assert_eq!(compile(&s, 3, &CompileOptions::new(MaskSpec::All)).unwrap_err(), PromptError::FrameOutOfRange(3));
    }

    #[test]
    fn extras_land_on_eligible_boundaries() {
        let s = canonical();
        let eligible = eligible_token_boundaries(&s, &s.frames[0]);
        assert_eq!(eligible, vec![0, 4, 5, 7, 8, 10, 11]);
        for seed in 0..50 {
            let p = compile(&s, 0, &CompileOptions::new(MaskSpec::Args(vec![])).extra(ExtraBlanks::Count(3)).seed(seed)).unwrap();
            assert_eq!(p.blank_count(), 4);
            assert_eq!(p.literals().join(" "), "In the operating room , the doctor the athlete .");
        }
    }

    #[test]
    fn adjunct_shuffle_is_seeded() {
        let line = r#"{"tokens":[{"text":"Yesterday","pos":"NN"},{"text":"he","pos":"PRP"},{"text":"ran","pos":"VBD","lemma":"run"},{"text":"quickly","pos":"RB"},{"text":"home","pos":"NN"}],"frames":[{"verb_index":2,"args":[{"tag":"ARGM-TMP","start":0,"end":1},{"tag":"ARG0","start":1,"end":2},{"tag":"ARGM-MNR","start":3,"end":4},{"tag":"ARGM-DIR","start":4,"end":5}]}]}"#;
        let s = crate::testutil::sentence(line);
        let headers: Vec<_> =
            (0..20).map(|seed| compile(&s, 0, &CompileOptions::new(MaskSpec::All).seed(seed)).unwrap().header).collect();
        for (seed, h) in headers.iter().enumerate() {
            assert_eq!(h, &compile(&s, 0, &CompileOptions::new(MaskSpec::All).seed(seed as u64)).unwrap().header);
            assert_eq!(h.args[0].role, RoleLabel::Agent);
            assert!(h.is_canonical());
        }
        assert!(headers.iter().any(|h| h != &headers[0]));
    }
}
