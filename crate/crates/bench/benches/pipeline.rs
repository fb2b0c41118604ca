use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use tailor_bench::corpus;
use tailor_core::clients::{mock_generate, mock_generate_output};
use tailor_core::dsl::{apply, parse_program};
use tailor_core::eval::{closeness, cycle_consistency, expected_spans, Observed};
use tailor_core::prompt::{compile, parse_prompt, parse_tagged_output, serialize, CompileOptions, ExtraBlanks, MaskSpec};
use tailor_core::train::{build_keyword_table, gen_dataset};

fn prompts(c: &mut Criterion) {
    let sentences = corpus();
    let opts = CompileOptions::new(MaskSpec::All).extra(ExtraBlanks::Count(2)).seed(1);
    c.bench_function("compile 100 frames", |b| {
        b.iter(|| sentences.iter().map(|s| compile(s, 0, &opts).unwrap().blank_count()).sum::<usize>())
    });
    let texts: Vec<String> = sentences.iter().map(|s| serialize(&compile(s, 0, &opts).unwrap())).collect();
    c.bench_function("parse 100 prompts", |b| {
        b.iter(|| texts.iter().map(|t| parse_prompt(black_box(t)).unwrap().blank_count()).sum::<usize>())
    });
}

fn perturb(c: &mut Criterion) {
    let sentences = corpus();
    let program = parse_program("CHANGE_VTENSE(future);AGENT:CHANGE_SPEC(partial);CHANGE_IDX(0:2)").unwrap();
    let bases: Vec<_> = sentences
        .iter()
        .map(|s| compile(s, 0, &CompileOptions::new(MaskSpec::All).extra(ExtraBlanks::Count(2))).unwrap())
        .collect();
    c.bench_function("apply + mock generate", |b| {
        b.iter(|| bases.iter().filter_map(|p| apply(p, &program, 0).ok()).map(|p| mock_generate(&p).len()).sum::<usize>())
    });
}

fn metrics(c: &mut Criterion) {
    let sentences = corpus();
    let program = parse_program("CHANGE_VTENSE(future)").unwrap();
    let cases: Vec<_> = sentences
        .iter()
        .map(|s| {
            let base = compile(s, 0, &CompileOptions::new(MaskSpec::All)).unwrap();
            let out = apply(&base, &program, 0).unwrap();
            let tagged = mock_generate(&out);
            (s, expected_spans(&base, &program), out, tagged)
        })
        .collect();
    c.bench_function("closeness 100", |b| {
        b.iter(|| cases.iter().map(|(s, e, p, _)| closeness(s, 0, &mock_generate_output(p).text(), e).unwrap().f1).sum::<f64>())
    });
    c.bench_function("cycle consistency 100", |b| {
        b.iter(|| {
            cases
                .iter()
                .filter(|(_, _, p, t)| cycle_consistency(p, Observed::Tagged(&parse_tagged_output(t).unwrap())).all_ok())
                .count()
        })
    });
}

fn dataset(c: &mut Criterion) {
    let sentences = corpus();
    c.bench_function("keyword table", |b| b.iter(|| build_keyword_table(&sentences, 0)));
    let table = build_keyword_table(&sentences, 0);
    c.bench_function("gen_dataset 100 frames", |b| {
        b.iter_batched(
            Vec::new,
            |mut out| {
                gen_dataset(&sentences, &table, 7, |ex| {
                    out.push(ex.input.len());
                    Ok::<_, ()>(())
                })
                .unwrap()
            },
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, prompts, perturb, metrics, dataset);
criterion_main!(benches);
