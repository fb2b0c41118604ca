mod common;

use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use tailor_core::clients::{mock_generate, mock_generate_output};
use tailor_core::dsl::{apply, parse_program, render_program};
use tailor_core::eval::{align_tokens, closeness, cycle_consistency, keep_count, perplexity_filter, ExpectedSpans, Observed};
use tailor_core::prompt::{
    build_target, compile, parse_prompt, parse_tagged_output, serialize, CompileOptions, ExtraBlanks, MaskSpec,
};
use tailor_core::srl::{classify_specificity, extract_keyword_candidates, Keyword, RoleLabel, Specificity};
use tailor_core::train::{build_keyword_table, frame_examples};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn prompt_serialize_parse_identity(seed in any::<u64>()) {
        let p = wire_prompt(&mut rng(seed));
        let text = serialize(&p);
        prop_assert_eq!(parse_prompt(&text).unwrap(), p);
        prop_assert_eq!(serialize(&parse_prompt(&text).unwrap()), text);
    }

    #[test]
    fn program_render_parse_identity(seed in any::<u64>()) {
        let p = program(&mut rng(seed));
        let text = render_program(&p);
        prop_assert_eq!(parse_program(&text).unwrap(), p.clone());
        prop_assert_eq!(text.parse::<tailor_core::dsl::OpProgram>().unwrap().to_string(), p.to_string());
    }

    #[test]
    fn mock_is_cycle_consistent(seed in any::<u64>()) {
        let p = valid_prompt(&mut rng(seed));
        let out = parse_tagged_output(&mock_generate(&p)).unwrap();
        let report = cycle_consistency(&p, Observed::Tagged(&out));
        prop_assert!(report.all_ok(), "{}\n{}\n{:?}", serialize(&p), out.render(), report);
    }

    #[test]
    fn alignment_matches_brute_force(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vocab = ["a", "b", "c", "d"];
        let o: Vec<&str> = (0..r.gen_range(0..6)).map(|_| *vocab.choose(&mut r).unwrap()).collect();
        let e: Vec<&str> = (0..r.gen_range(0..6)).map(|_| *vocab.choose(&mut r).unwrap()).collect();
        let exhaustive = brute_force_flags(&o, &e);
        prop_assert_eq!(&memo_flags(&o, &e), &exhaustive);
        prop_assert_eq!(align_tokens(&o, &e), exhaustive);
    }

    #[test]
    fn filter_keeps_ceiling_and_order(scores in prop::collection::vec(0.0f64..100.0, 1..60), keep in 0.01f64..=1.0) {
        let items: Vec<(usize, f64)> = scores.iter().copied().enumerate().collect();
        let kept = perplexity_filter(&items, keep).unwrap();
        prop_assert_eq!(kept.len(), keep_count(items.len(), keep));
        prop_assert!(kept.windows(2).all(|w| w[0] < w[1]));
        // nothing dropped scores below anything kept
        let worst_kept = kept.iter().map(|&i| scores[i]).fold(f64::MIN, f64::max);
        for (i, s) in scores.iter().enumerate() {
            if !kept.contains(&i) {
                prop_assert!(*s >= worst_kept);
            }
        }
    }

    #[test]
    fn compiled_prompts_rebuild_their_sentence(seed in any::<u64>(), extra in 0usize..4, mask_bits in 0u8..8) {
        let s = canonical();
        let roles = [RoleLabel::Locative, RoleLabel::Agent, RoleLabel::Patient];
        let mask = MaskSpec::Roles(roles.iter().enumerate().filter(|(i, _)| mask_bits & (1 << i) != 0).map(|(_, r)| r.clone()).collect());
        let p = compile(&s, 0, &CompileOptions::new(mask).extra(ExtraBlanks::Count(extra)).seed(seed)).unwrap();
        prop_assert_eq!(p.blank_count(), 1 + mask_bits.count_ones() as usize + extra);
        let target = build_target(&s, &p).unwrap();
        prop_assert_eq!(parse_tagged_output(&target).unwrap().text(), s.text());
        // the mock realizes complete keywords verbatim
        prop_assert_eq!(mock_generate_output(&p).text(), s.text());
    }

    #[test]
    fn keyword_candidates_classify_consistently(seed in any::<u64>(), which in 0usize..3, lowercase in any::<bool>()) {
        let s = canonical();
        let frame = &s.frames[0];
        let arg = &frame.args[which];
        let span: Vec<String> = s.texts(arg.start, arg.end).iter().map(|t| t.to_string()).collect();
        for c in extract_keyword_candidates(arg, &s, seed, lowercase) {
            if let Keyword::Text { content, spec } = &c {
                let words: Vec<&str> = content.split(' ').collect();
                prop_assert_eq!(classify_specificity(&words, &span).unwrap(), *spec);
            }
        }
    }

    #[test]
    fn specificity_is_monotone(drop in 0usize..4) {
        let span = ["In", "the", "operating", "room"];
        let full: Vec<&str> = span.to_vec();
        let mut fewer = full.clone();
        fewer.remove(drop);
        let rank = |s: Specificity| match s { Specificity::Sparse => 0, Specificity::Partial => 1, Specificity::Complete => 2 };
        prop_assert!(rank(classify_specificity(&fewer, &span).unwrap()) <= rank(classify_specificity(&full, &span).unwrap()));
    }

    #[test]
    fn closeness_matches_brute_force(seed in any::<u64>()) {
        let s = canonical();
        let mut r = rng(seed);
        let (edited, expected) = synthetic_edit(&mut r);
        let report = closeness(&s, 0, &edited, &expected).unwrap();
        let orig: Vec<&str> = s.tokens.iter().map(|t| t.text.as_str()).collect();
        let edit: Vec<&str> = edited.split_whitespace().collect();
        let flags = memo_flags(&orig, &edit);
        let spans = [(0, 4, expected.roles.contains(&RoleLabel::Locative)), (5, 7, expected.roles.contains(&RoleLabel::Agent)), (7, 8, expected.verb), (8, 10, expected.roles.contains(&RoleLabel::Patient))];
        let (p, rc, f) = brute_force_closeness(&flags, &spans);
        prop_assert!((report.precision - p).abs() < 1e-12 && (report.recall - rc).abs() < 1e-12 && (report.f1 - f).abs() < 1e-12);
    }
}

/// A random edit of the canonical sentence and a random expectation.
fn synthetic_edit<R: Rng>(r: &mut R) -> (String, ExpectedSpans) {
    let mut words: Vec<String> = canonical().tokens.iter().map(|t| t.text.clone()).collect();
    for _ in 0..r.gen_range(0..5) {
        let i = r.gen_range(0..words.len());
        match r.gen_range(0..3) {
            0 => words[i] = ["hospital", "nurse", "consoled", "patient", "a"].choose(r).unwrap().to_string(),
            1 if words.len() > 1 => {
                words.remove(i);
            }
            _ => words.insert(i, ["very", "kindly", "new"].choose(r).unwrap().to_string()),
        }
    }
    let roles = [RoleLabel::Locative, RoleLabel::Agent, RoleLabel::Patient];
    let expected = ExpectedSpans { verb: r.gen_bool(0.5), roles: roles.into_iter().filter(|_| r.gen_bool(0.5)).collect() };
    (words.join(" "), expected)
}

#[test]
fn perturbations_of_compiled_prompts_stay_parseable() {
    let s = canonical();
    for seed in 0..300u64 {
        let mut r = rng(seed);
        let base = compile(&s, 0, &CompileOptions::new(MaskSpec::All).seed(seed)).unwrap();
        let prog = program(&mut r);
        if let Ok(out) = apply(&base, &prog, seed) {
            let text = serialize(&out);
            assert_eq!(serialize(&parse_prompt(&text).unwrap()), text, "{prog}");
        }
    }
}

#[test]
fn fixture_examples_have_aligned_targets() {
    let corpus = tailor_core::srl::parse_corpus(&fixture("corpus100.jsonl")).unwrap();
    let table = build_keyword_table(&corpus.sentences, 1);
    for (si, sentence) in corpus.sentences.iter().enumerate().take(25) {
        for ex in frame_examples(sentence, si, 0, &table, 3).unwrap() {
            let target = parse_tagged_output(&ex.target).unwrap();
            assert_eq!(target.text(), sentence.text());
            parse_prompt(&ex.input).unwrap();
        }
    }
}
