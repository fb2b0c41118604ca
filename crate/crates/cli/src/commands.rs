use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use tailor_core::dsl::{apply, parse_program, DslError, OpProgram};
use tailor_core::eval::{
    closeness, cycle_consistency, expected_spans, fluency_ratio, keep_count, perplexity_filter, select_best, Observed,
};
use tailor_core::prompt::{
    build_target, compile, parse_prompt, parse_tagged_output, serialize, CompileOptions, ExtraBlanks, MaskSpec, PromptError,
    PromptSpec,
};
use tailor_core::recipes::{
    nli_perturb, parse_params, run_recipe, ContrastRecipe, NliStrategy, RecipeError, RecipeOutput, StyleTransfer,
};
use tailor_core::srl::{PredicateFrame, RoleLabel, SrlSentence};
use tailor_core::train::{build_keyword_table, frame_examples, mix_seed, DatasetSummary, KeywordTable};

use crate::backends::Backends;
use crate::io::{read_corpus, read_lines, read_records, Failure, Outcome, Output, Summary};

pub struct Ctx {
    pub backends: Backends,
    pub pool: rayon::ThreadPool,
}

impl Ctx {
    fn map<T: Sync, R: Send>(&self, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
        self.pool.install(|| items.par_iter().map(f).collect())
    }
}

/// Which arguments to blank: `all`, `program` (the roles the op program
/// names), or a comma-separated role list.
fn mask_for(spec: &str, frame: &PredicateFrame, program: Option<&OpProgram>) -> Result<MaskSpec, String> {
    match spec {
        "all" => Ok(MaskSpec::All),
        "program" => {
            let program = program.ok_or("--mask program needs an op program")?;
            let mut roles = program.roles();
            if program.swaps_core() {
                roles.extend([RoleLabel::Agent, RoleLabel::Patient]);
            }
            let idx = frame.args.iter().enumerate().filter(|(_, a)| roles.contains(&a.role)).map(|(i, _)| i).collect();
            Ok(MaskSpec::Args(idx))
        }
        list => list
            .split(',')
            .map(|r| r.trim().parse::<RoleLabel>().map_err(|_| format!("unknown role {r:?} in --mask")))
            .collect::<Result<Vec<_>, _>>()
            .map(MaskSpec::Roles),
    }
}

fn check_mask(spec: &str) -> Result<()> {
    if spec != "all" && spec != "program" {
        for r in spec.split(',') {
            r.trim().parse::<RoleLabel>().map_err(|_| anyhow!("unknown role {r:?} in --mask"))?;
        }
    }
    Ok(())
}

fn frames_of(sentence: &SrlSentence, only: Option<usize>) -> Vec<usize> {
    match only {
        Some(f) => (f < sentence.frames.len()).then_some(f).into_iter().collect(),
        None => (0..sentence.frames.len()).collect(),
    }
}

/// Inputs that do not fit the frame are skipped, not failed.
fn is_inapplicable_prompt(e: &PromptError) -> bool {
    matches!(e, PromptError::UnknownRole(_))
}

fn is_inapplicable_dsl(e: &DslError) -> bool {
    matches!(e, DslError::UnknownRole(_) | DslError::MissingCore | DslError::NotMasked(_) | DslError::SpecOnAny(_))
        || matches!(e, DslError::Prompt(p) if is_inapplicable_prompt(p))
}

#[derive(Args, Debug)]
pub struct CompileArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    /// `all` or a comma-separated list of roles to blank.
    #[arg(long, default_value = "all")]
    pub mask: String,
    /// Extra blanks at sampled boundaries.
    #[arg(long, default_value_t = 0)]
    pub extra: usize,
    /// Only this frame of each sentence.
    #[arg(long)]
    pub frame: Option<usize>,
}

pub fn compile_cmd(ctx: &Ctx, args: &CompileArgs) -> Result<Summary> {
    if args.mask == "program" {
        bail!("--mask program is only meaningful for perturb");
    }
    check_mask(&args.mask)?;
    let mut summary = Summary::new("compile");
    let corpus = read_corpus(&args.corpus, &mut summary)?;
    let mut out = Output::open(args.out.as_deref())?;
    let items: Vec<(usize, &SrlSentence)> = corpus.sentences.iter().enumerate().collect();
    let outcomes = ctx.map(&items, |&(si, sentence)| {
        let line = corpus.lines[si];
        let mut o = Outcome::default();
        for fi in frames_of(sentence, args.frame) {
            let mask = mask_for(&args.mask, &sentence.frames[fi], None).expect("mask checked");
            let options = CompileOptions::new(mask)
                .extra(ExtraBlanks::Count(args.extra))
                .seed(mix_seed(args.seed, &[si as u64, fi as u64]));
            match compile(sentence, fi, &options).and_then(|p| Ok((build_target(sentence, &p)?, p))) {
                Ok((target, p)) => o.records.push(json!({
                    "sentence": si, "line": line, "frame": fi, "prompt": serialize(&p), "target": target,
                })),
                Err(e) if is_inapplicable_prompt(&e) => o.skips.push(Failure::at(line, Some(fi), e)),
                Err(e) => o.failures.push(Failure::at(line, Some(fi), e)),
            }
        }
        o
    });
    out.drain(outcomes, &mut summary)?;
    out.finish()?;
    Ok(summary)
}

#[derive(Args, Debug)]
pub struct GenerationArgs {
    /// Candidates requested per prompt when a generator is configured.
    #[arg(long, default_value_t = 1)]
    pub candidates: u32,
    /// Phrase the generator should avoid (repeatable).
    #[arg(long = "ban")]
    pub banned: Vec<String>,
}

fn with_generations(ctx: &Ctx, gen: &GenerationArgs, prompt: &PromptSpec, mut record: Value, line: usize, fi: usize) -> Outcome {
    match ctx.backends.generate(prompt, gen.candidates, &gen.banned) {
        Ok(Some(g)) => {
            record["generations"] = json!(g);
            Outcome { records: vec![record], ..Default::default() }
        }
        Ok(None) => Outcome { records: vec![record], ..Default::default() },
        Err(e) => Outcome::failed(Failure::at(line, Some(fi), e)),
    }
}

#[derive(Args, Debug)]
pub struct PerturbArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    /// Op program applied to every frame.
    #[arg(long, conflicts_with = "ops_file", required_unless_present = "ops_file")]
    pub ops: Option<String>,
    /// One program per line, aligned with the corpus lines; blank lines
    /// leave that sentence alone.
    #[arg(long)]
    pub ops_file: Option<PathBuf>,
    /// `all`, `program` or a comma-separated role list.
    #[arg(long, default_value = "all")]
    pub mask: String,
    #[arg(long)]
    pub frame: Option<usize>,
    #[command(flatten)]
    pub generation: GenerationArgs,
}

fn perturb_frame(
    ctx: &Ctx,
    args: &PerturbArgs,
    sentence: &SrlSentence,
    si: usize,
    line: usize,
    fi: usize,
    program: &OpProgram,
) -> Outcome {
    let mask = match mask_for(&args.mask, &sentence.frames[fi], Some(program)) {
        Ok(m) => m,
        Err(e) => return Outcome::failed(Failure::at(line, Some(fi), e)),
    };
    let options = CompileOptions::new(mask).seed(mix_seed(args.seed, &[si as u64, fi as u64, 0]));
    let base = match compile(sentence, fi, &options) {
        Ok(p) => p,
        Err(e) if is_inapplicable_prompt(&e) => {
            return Outcome { skips: vec![Failure::at(line, Some(fi), e)], ..Default::default() }
        }
        Err(e) => return Outcome::failed(Failure::at(line, Some(fi), e)),
    };
    let perturbed = match apply(&base, program, mix_seed(args.seed, &[si as u64, fi as u64, 1])) {
        Ok(p) => p,
        Err(e) if is_inapplicable_dsl(&e) => {
            return Outcome { skips: vec![Failure::at(line, Some(fi), e)], ..Default::default() }
        }
        Err(e) => return Outcome::failed(Failure::at(line, Some(fi), e)),
    };
    let record = json!({
        "sentence": si, "line": line, "frame": fi,
        "prompt": serialize(&base), "prompt_json": base, "program": program.to_string(),
        "perturbed": serialize(&perturbed),
    });
    with_generations(ctx, &args.generation, &perturbed, record, line, fi)
}

pub fn perturb_cmd(ctx: &Ctx, args: &PerturbArgs) -> Result<Summary> {
    check_mask(&args.mask)?;
    let mut summary = Summary::new("perturb");
    let corpus = read_corpus(&args.corpus, &mut summary)?;
    // program per corpus source line (1-based), or one for all
    let programs: Result<BTreeMap<usize, Result<OpProgram, String>>> = match (&args.ops, &args.ops_file) {
        (Some(ops), _) => {
            let p = parse_program(ops).with_context(|| format!("--ops {ops:?}"))?;
            Ok(corpus.lines.iter().map(|&l| (l, Ok(p.clone()))).collect())
        }
        (None, Some(path)) => Ok(read_lines(path)?
            .into_iter()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(i, l)| (i + 1, parse_program(&l).map_err(|e| format!("program on line {}: {e}", i + 1))))
            .collect()),
        (None, None) => bail!("one of --ops or --ops-file is required"),
    };
    let programs = programs?;
    let mut out = Output::open(args.out.as_deref())?;
    let items: Vec<(usize, &SrlSentence)> = corpus.sentences.iter().enumerate().collect();
    let outcomes = ctx.map(&items, |&(si, sentence)| {
        let line = corpus.lines[si];
        match programs.get(&line) {
            None => Outcome::default(),
            Some(Err(e)) => Outcome::failed(Failure::at(line, None, e)),
            Some(Ok(program)) => {
                let mut o = Outcome::default();
                for fi in frames_of(sentence, args.frame) {
                    let r = perturb_frame(ctx, args, sentence, si, line, fi, program);
                    o.records.extend(r.records);
                    o.failures.extend(r.failures);
                    o.skips.extend(r.skips);
                }
                o
            }
        }
    });
    out.drain(outcomes, &mut summary)?;
    out.finish()?;
    Ok(summary)
}

#[derive(Args, Debug)]
pub struct GenDataArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Keyword table JSON: loaded if it exists, otherwise built from the
    /// corpus and written here.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

pub fn gen_data_cmd(ctx: &Ctx, args: &GenDataArgs) -> Result<Summary> {
    let mut summary = Summary::new("gen-data");
    let corpus = read_corpus(&args.corpus, &mut summary)?;
    let table: KeywordTable = match &args.table {
        Some(p) if p.exists() => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading table {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing table {}", p.display()))?
        }
        path => {
            let t = build_keyword_table(&corpus.sentences, args.seed);
            if let Some(p) = path {
                std::fs::write(p, serde_json::to_string_pretty(&t)?).with_context(|| format!("writing table {}", p.display()))?;
            }
            t
        }
    };
    let items: Vec<(usize, usize)> =
        corpus.sentences.iter().enumerate().flat_map(|(si, s)| (0..s.frames.len()).map(move |fi| (si, fi))).collect();
    let results = ctx.map(&items, |&(si, fi)| frame_examples(&corpus.sentences[si], si, fi, &table, args.seed));
    let mut out = Output::open(args.out.as_deref())?;
    let mut data = DatasetSummary::default();
    for ((si, fi), r) in items.into_iter().zip(results) {
        match r {
            Ok(examples) => {
                data.record(&examples);
                for ex in &examples {
                    out.write(ex)?;
                    summary.records_out += 1;
                }
            }
            Err(e) => summary.fail(Failure::at(corpus.lines[si], Some(fi), e)),
        }
    }
    out.finish()?;
    summary.set("positives", data.positives);
    summary.set("negatives", data.negatives);
    summary.set("skipped_strategies", &data.skipped);
    Ok(summary)
}

#[derive(Args, Debug)]
pub struct RecipeArgs {
    /// NLI strategy, contrast recipe, pp_to_noun/pp_to_verb, or
    /// `style:<transfer>[+<transfer>...]`.
    #[arg(long)]
    pub name: String,
    /// `key=value,...` (frame, role, text, tense, prep, answer, wh).
    #[arg(long, default_value = "")]
    pub params: String,
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub generation: GenerationArgs,
}

fn check_recipe_name(name: &str) -> Result<()> {
    let ok = name.parse::<NliStrategy>().is_ok()
        || name.parse::<ContrastRecipe>().is_ok()
        || matches!(name, "pp_to_noun" | "pp_to_verb")
        || name.strip_prefix("style:").is_some_and(|s| StyleTransfer::parse_list(s).is_ok());
    if !ok {
        bail!("unknown recipe {name:?}; expected one of {}", tailor_core::recipes::RECIPE_NAMES.join(", "));
    }
    Ok(())
}

fn recipe_record(si: usize, line: usize, o: &RecipeOutput) -> Value {
    let mut r = json!({
        "sentence": si, "line": line, "frame": o.frame, "recipe": o.recipe,
        "prompt": serialize(&o.base), "prompt_json": o.base, "program": o.program.to_string(),
        "perturbed": serialize(&o.perturbed),
    });
    if let Some(label) = o.label {
        r["label"] = json!(label);
    }
    if !o.metadata.is_empty() {
        r["metadata"] = json!(o.metadata);
    }
    r
}

pub fn recipe_cmd(ctx: &Ctx, args: &RecipeArgs) -> Result<Summary> {
    check_recipe_name(&args.name)?;
    let params = parse_params(&args.params)?;
    let mut summary = Summary::new("recipe");
    summary.set("recipe", &args.name);
    let corpus = read_corpus(&args.corpus, &mut summary)?;
    let items: Vec<(usize, &SrlSentence)> = corpus.sentences.iter().enumerate().collect();
    let nli = args.name.parse::<NliStrategy>().ok();
    let outcomes = ctx.map(&items, |&(si, sentence)| -> Result<Outcome, RecipeError> {
        let line = corpus.lines[si];
        let seed = mix_seed(args.seed, &[si as u64]);
        let mut o = Outcome::default();
        let outputs = match nli {
            Some(strategy) => {
                let r = nli_perturb(sentence, strategy, seed);
                o.skips.extend(r.skipped.into_iter().map(|(fi, why)| Failure::at(line, Some(fi), why)));
                r.outputs
            }
            None => match run_recipe(&args.name, sentence, &params, seed) {
                Ok(v) => v,
                Err(e @ (RecipeError::Parameter(_) | RecipeError::UnknownRecipe(_))) => return Err(e),
                Err(e @ RecipeError::Inapplicable(_)) => {
                    o.skips.push(Failure::at(line, None, e));
                    Vec::new()
                }
                Err(e) => {
                    o.failures.push(Failure::at(line, None, e));
                    Vec::new()
                }
            },
        };
        for out in &outputs {
            let r = with_generations(ctx, &args.generation, &out.perturbed, recipe_record(si, line, out), line, out.frame);
            o.records.extend(r.records);
            o.failures.extend(r.failures);
        }
        Ok(o)
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>, _>>().context("recipe parameters")?;
    let mut out = Output::open(args.out.as_deref())?;
    out.drain(outcomes, &mut summary)?;
    out.finish()?;
    Ok(summary)
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Corpus the records' `sentence` indices refer to.
    #[arg(long)]
    pub corpus: PathBuf,
    /// perturb or recipe output, with `generations`.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn field<'a>(r: &'a Map<String, Value>, key: &str) -> Result<&'a Value, String> {
    r.get(key).ok_or_else(|| format!("missing field {key:?}"))
}

fn usize_field(r: &Map<String, Value>, key: &str) -> Result<usize, String> {
    field(r, key)?.as_u64().map(|v| v as usize).ok_or_else(|| format!("field {key:?} is not an index"))
}

fn str_field<'a>(r: &'a Map<String, Value>, key: &str) -> Result<&'a str, String> {
    field(r, key)?.as_str().ok_or_else(|| format!("field {key:?} is not a string"))
}

#[derive(Default)]
struct EvalTotals {
    n: usize,
    precision: f64,
    recall: f64,
    f1: f64,
    controlled: usize,
    checked: usize,
    fluency: f64,
    scored: usize,
}

fn eval_record(ctx: &Ctx, sentences: &[SrlSentence], r: &Map<String, Value>) -> Result<Vec<Value>, String> {
    let si = usize_field(r, "sentence")?;
    let fi = usize_field(r, "frame")?;
    let sentence = sentences.get(si).ok_or_else(|| format!("sentence {si} is not in the corpus"))?;
    let base: PromptSpec = match r.get("prompt_json") {
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| format!("prompt_json: {e}"))?,
        None => parse_prompt(str_field(r, "prompt")?).map_err(|e| format!("prompt: {e}"))?,
    };
    let program = match r.get("program").and_then(Value::as_str) {
        Some(p) if !p.trim().is_empty() => parse_program(p).map_err(|e| format!("program: {e}"))?,
        _ => OpProgram { clauses: Vec::new() },
    };
    let perturbed = match r.get("perturbed").and_then(Value::as_str) {
        Some(p) => parse_prompt(p).map_err(|e| format!("perturbed: {e}"))?,
        None => apply(&base, &program, 0).map_err(|e| e.to_string())?,
    };
    let generations: Vec<String> = match r.get("generations") {
        Some(Value::Array(a)) => a.iter().filter_map(|v| v.as_str().map(String::from)).collect(),
        _ => match ctx.backends.generate(&perturbed, 1, &[]).map_err(|e| e.to_string())? {
            Some(g) => g,
            None => return Err("record has no generations and no generator is configured".into()),
        },
    };
    let expected = expected_spans(&base, &program);
    let original_text = sentence.text();
    let mut out = Vec::new();
    for (k, g) in generations.iter().enumerate() {
        let tagged = parse_tagged_output(g).ok().filter(|t| t.tagged().next().is_some());
        let plain = tagged.as_ref().map_or_else(|| g.clone(), |t| t.text());
        let report = closeness(sentence, fi, &plain, &expected).map_err(|e| e.to_string())?;
        let control = match (&tagged, &ctx.backends.srl) {
            (Some(t), _) => Some(cycle_consistency(&perturbed, Observed::Tagged(t))),
            (None, Some(srl)) => {
                let predicted = srl.predict(&plain).map_err(|e| e.to_string())?;
                Some(cycle_consistency(&perturbed, Observed::Srl(&predicted)))
            }
            (None, None) => None,
        };
        let fluency = match &ctx.backends.scorer {
            Some(s) => {
                let scores = s.score(&[original_text.clone(), plain.clone()]).map_err(|e| e.to_string())?;
                Some((fluency_ratio(scores[0].loss, scores[1].loss).map_err(|e| e.to_string())?, scores[1].perplexity))
            }
            None => None,
        };
        let mut rec = json!({
            "sentence": si, "line": r.get("line"), "frame": fi, "generation": k, "text": plain,
            "closeness": {"precision": report.precision, "recall": report.recall, "f1": report.f1},
        });
        if let Some(c) = control {
            rec["controllability"] = json!({"all_ok": c.all_ok(), "verb": c.verb, "args": c.args});
        }
        if let Some((f, ppl)) = fluency {
            rec["fluency"] = json!(f);
            rec["score"] = json!(ppl);
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn eval_cmd(ctx: &Ctx, args: &EvalArgs) -> Result<Summary> {
    let mut summary = Summary::new("eval");
    let corpus = read_corpus(&args.corpus, &mut summary)?;
    let records = read_records(&args.input, &mut summary)?;
    let outcomes = ctx.map(&records, |(line, r)| match eval_record(ctx, &corpus.sentences, r) {
        Ok(records) => Outcome { records, ..Default::default() },
        Err(e) => Outcome::failed(Failure::at(*line, r.get("frame").and_then(Value::as_u64).map(|f| f as usize), e)),
    });
    let mut t = EvalTotals::default();
    for rec in outcomes.iter().flat_map(|o| &o.records) {
        t.n += 1;
        let c = &rec["closeness"];
        t.precision += c["precision"].as_f64().unwrap_or(0.0);
        t.recall += c["recall"].as_f64().unwrap_or(0.0);
        t.f1 += c["f1"].as_f64().unwrap_or(0.0);
        if let Some(ok) = rec["controllability"]["all_ok"].as_bool() {
            t.checked += 1;
            t.controlled += usize::from(ok);
        }
        if let Some(ratio) = rec["fluency"]["ratio"].as_f64() {
            t.scored += 1;
            t.fluency += ratio;
        }
    }
    let mean = |sum: f64, n: usize| if n == 0 { Value::Null } else { json!(sum / n as f64) };
    summary.set(
        "means",
        json!({
            "precision": mean(t.precision, t.n), "recall": mean(t.recall, t.n), "f1": mean(t.f1, t.n),
            "controllability": mean(t.controlled as f64, t.checked), "fluency_ratio": mean(t.fluency, t.scored),
        }),
    );
    let mut out = Output::open(args.out.as_deref())?;
    out.drain(outcomes, &mut summary)?;
    out.finish()?;
    Ok(summary)
}

#[derive(Args, Debug)]
pub struct FilterArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Fraction of candidates kept (lowest scores first).
    #[arg(long, default_value_t = 0.75)]
    pub keep: f64,
    /// Numeric field holding the score (perplexity); lower is better.
    #[arg(long, default_value = "score")]
    pub score_field: String,
    /// Text scored by the configured scorer when the score field is absent.
    #[arg(long, default_value = "text")]
    pub text_field: String,
    /// Filter within groups of records sharing this field's value.
    #[arg(long)]
    pub group_by: Option<String>,
    /// Keep only the lowest-scoring record of each group.
    #[arg(long)]
    pub best: bool,
}

fn record_score(ctx: &Ctx, args: &FilterArgs, r: &Map<String, Value>) -> Result<f64, String> {
    if let Some(v) = r.get(&args.score_field) {
        return v.as_f64().filter(|s| s.is_finite()).ok_or_else(|| format!("field {:?} is not a number", args.score_field));
    }
    let scorer =
        ctx.backends.scorer.as_ref().ok_or_else(|| format!("no {:?} field and no scorer configured", args.score_field))?;
    let text = str_field(r, &args.text_field)?;
    let scores = scorer.score(&[text.to_string()]).map_err(|e| e.to_string())?;
    Ok(scores[0].perplexity)
}

pub fn filter_cmd(ctx: &Ctx, args: &FilterArgs) -> Result<Summary> {
    if !(args.keep > 0.0 && args.keep <= 1.0) {
        bail!("--keep must be in (0, 1], got {}", args.keep);
    }
    let mut summary = Summary::new("filter");
    let records = read_records(&args.input, &mut summary)?;
    let scores = ctx.map(&records, |(_, r)| record_score(ctx, args, r));

    let mut groups: BTreeMap<String, Vec<(usize, f64)>> = BTreeMap::new();
    for (i, ((line, r), s)) in records.iter().zip(&scores).enumerate() {
        match s {
            Ok(s) => {
                let key = args.group_by.as_ref().map_or(String::new(), |g| r.get(g).map_or("null".into(), Value::to_string));
                groups.entry(key).or_default().push((i, *s));
            }
            Err(e) => summary.fail(Failure::at(*line, None, e)),
        }
    }
    let mut kept = vec![false; records.len()];
    let mut candidates = 0;
    for members in groups.values() {
        candidates += members.len();
        let survivors: Vec<usize> = if args.best { vec![*select_best(members)?] } else { perplexity_filter(members, args.keep)? };
        for i in survivors {
            kept[i] = true;
        }
    }
    let mut out = Output::open(args.out.as_deref())?;
    for ((_, r), keep) in records.iter().zip(kept) {
        if keep {
            out.write(r)?;
            summary.records_out += 1;
        }
    }
    out.finish()?;
    summary.set("candidates", candidates);
    summary.set("groups", groups.len());
    summary.set(
        "expected_kept",
        if args.best { groups.len() } else { groups.values().map(|m| keep_count(m.len(), args.keep)).sum() },
    );
    Ok(summary)
}
