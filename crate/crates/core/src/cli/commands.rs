use std::collections::BTreeMap;
use std::io::BufRead;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;

use super::*;
use crate::corpusio::{
    aggregate_decay, audit_decay, carve_dev, filter_paraphrase_corpus, load_corpus_pairs,
    load_dataset, merge_corpora, read_id_list, read_jsonl, split_dataset, write_jsonl,
    write_manifest, ColumnMap, CorpusPair, DatasetManifest, Format, Source, SplitSpec,
    TrainingConfigExport, PUBLISHED_MERGED_TOTAL,
};
use crate::datasets::DatasetSpec;
use crate::genclient::{batch_generate, load_candidates_file, GenerationClient, HttpTransport};
use crate::metrics::{
    corpus_bleu, global_average, macro_f1, render_table, ScoreTable, Smoothing, BLEU_VARIANT,
};
use crate::normalize::{count_emoji, normalize_tweet, strip_emoji, TweetRecord};
use crate::simfilter::{build_para_clean, filter_stats, select_para_n, FilterConfig, ParaphraseSet};

pub(super) fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    let ctx = Ctx {
        cfg,
        dry_run: cli.dry_run,
    };
    match &cli.command {
        Command::Normalize(a) => ctx.normalize(a),
        Command::Split(a) => ctx.split(a),
        Command::CarveDev(a) => ctx.carve_dev(a),
        Command::AuditDecay(a) => ctx.audit_decay(a),
        Command::BuildCorpus(a) => ctx.build_corpus(a),
        Command::Generate(a) => ctx.generate(a),
        Command::ParaClean(a) => ctx.para_clean(a),
        Command::SelectParaN(a) => ctx.select_para_n(a),
        Command::StripEmoji(a) => ctx.strip_emoji(a),
        Command::Metrics(a) => ctx.metrics(a),
        Command::ExportTrainConfig(a) => ctx.export_train_config(a),
    }
}

struct Ctx {
    cfg: PipelineConfig,
    dry_run: bool,
}

fn manifest_beside(file: &Path) -> PathBuf {
    let mut name = file.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    file.with_file_name(name)
}

fn describe(path: &Path) -> String {
    format!("file:{}", path.display())
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CorpusError::io(dir, e).into())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("value serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CorpusError::io(path, e).into())
}

fn dataset_tag(records: &[TweetRecord]) -> String {
    records.first().map(|r| r.dataset.clone()).unwrap_or_default()
}

impl Ctx {
    /// Prints the plan in dry-run mode; otherwise writes the manifest.
    fn finish(&self, manifest: DatasetManifest, path: &Path) -> Result<(), CliError> {
        if self.dry_run {
            let planned: BTreeMap<_, _> = manifest
                .artifacts
                .iter()
                .map(|(role, a)| (role.clone(), a.lines))
                .collect();
            let plan = serde_json::json!({
                "command": manifest.command,
                "dry_run": true,
                "planned": planned,
                "notes": manifest.notes,
            });
            println!("{}", serde_json::to_string_pretty(&plan).expect("plan serializes"));
            return Ok(());
        }
        write_manifest(&manifest, path)?;
        eprintln!("wrote {}", path.display());
        Ok(())
    }

    fn write_records<T: Serialize>(&self, path: &Path, items: &[T]) -> Result<usize, CliError> {
        if self.dry_run {
            return Ok(items.len());
        }
        Ok(write_jsonl(path, items)?)
    }

    fn split_spec(&self, seed: Option<u64>) -> SplitSpec {
        let mut spec = self.cfg.split.clone().unwrap_or_default();
        if let Some(seed) = seed {
            spec.seed = seed;
        }
        spec
    }

    fn normalize(&self, a: &NormalizeArgs) -> Result<(), CliError> {
        let format: Format = a.format.parse().map_err(CliError::Config)?;
        let columns = match (&a.columns, format) {
            (Some(spec), _) => spec.parse::<ColumnMap>().map_err(CliError::Config)?,
            (None, Format::Tsv { header: false }) => ColumnMap::positional(false),
            (None, _) => ColumnMap::default(),
        };
        let spec: Option<DatasetSpec> = a.dataset.as_deref().map(|d| self.cfg.dataset(d)).transpose()?;

        let mut norm = self.cfg.normalization.clone().unwrap_or_default();
        if let Some(spec) = &spec {
            if norm.seed_hashtags.is_empty() && !a.no_default_seeds {
                norm.seed_hashtags = spec.seed_hashtags.clone();
            }
        }
        norm = norm.with_seed_hashtags(&a.seed_hashtags);
        if a.strip_emoji {
            norm.strip_emoji = true;
        }
        if let Some(t) = &a.user_token {
            norm.user_token = t.clone();
        }
        if let Some(t) = &a.url_token {
            norm.url_token = t.clone();
        }
        norm.validate()?;

        let records = load_dataset(&a.input, format, &columns, spec.as_ref())?;
        let mut out = Vec::with_capacity(records.len());
        let mut dropped = Vec::new();
        for r in &records {
            match normalize_tweet(r, &norm) {
                Ok(n) => out.push(n),
                Err(NormalizeError::EmptyAfterNormalization { id }) => dropped.push(id),
                Err(e) => return Err(e.into()),
            }
        }
        if !dropped.is_empty() {
            eprintln!("dropped {} records that were empty after normalization", dropped.len());
        }
        let lines = self.write_records(&a.out, &out)?;

        let name = spec.as_ref().map(|s| s.name.clone()).unwrap_or_default();
        let mut m = DatasetManifest::new(name, describe(&a.input), "normalize").with_normalization(&norm);
        m.artifact("normalized", &a.out, lines);
        m.note("input_records", records.len());
        m.note("dropped_empty", &dropped);
        self.finish(m, &manifest_beside(&a.out))
    }

    fn split(&self, a: &SplitArgs) -> Result<(), CliError> {
        let mut spec = self.split_spec(a.seed);
        if let Some(f) = a.train {
            spec.train_fraction = f;
        }
        if let Some(f) = a.dev {
            spec.dev_fraction = f;
        }
        if let Some(f) = a.test {
            spec.test_fraction = f;
        }
        spec.stratify_by_label |= a.stratify;
        let records: Vec<TweetRecord> = read_jsonl(&a.input)?;
        let name = dataset_tag(&records);
        let (train, dev, test) = split_dataset(records, &spec)?;
        if !self.dry_run {
            ensure_dir(&a.out_dir)?;
        }
        let mut m = DatasetManifest::new(name, describe(&a.input), "split").with_split(&spec);
        for (role, part) in [("train", &train), ("dev", &dev), ("test", &test)] {
            let path = a.out_dir.join(format!("{role}.jsonl"));
            let lines = self.write_records(&path, part)?;
            m.artifact(role, &path, lines);
        }
        self.finish(m, &a.out_dir.join("manifest.json"))
    }

    fn carve_dev(&self, a: &CarveDevArgs) -> Result<(), CliError> {
        let spec = self.split_spec(a.seed);
        let records: Vec<TweetRecord> = read_jsonl(&a.input)?;
        let name = dataset_tag(&records);
        let (train, dev) = carve_dev(records, a.fraction, spec.seed)?;
        if !self.dry_run {
            ensure_dir(&a.out_dir)?;
        }
        let mut m = DatasetManifest::new(name, describe(&a.input), "carve-dev");
        m.seed = Some(spec.seed);
        m.note("dev_fraction", a.fraction);
        for (role, part) in [("train", &train), ("dev", &dev)] {
            let path = a.out_dir.join(format!("{role}.jsonl"));
            let lines = self.write_records(&path, part)?;
            m.artifact(role, &path, lines);
        }
        self.finish(m, &a.out_dir.join("manifest.json"))
    }

    fn audit_decay(&self, a: &AuditDecayArgs) -> Result<(), CliError> {
        if a.orig.len() != a.retrieved.len() {
            return Err(CliError::Config(format!(
                "{} --orig lists but {} --retrieved lists",
                a.orig.len(),
                a.retrieved.len()
            )));
        }
        if !a.dataset.is_empty() && a.dataset.len() != a.orig.len() {
            return Err(CliError::Config("give one --dataset per --orig".into()));
        }
        let mut reports = Vec::new();
        for (i, (orig, got)) in a.orig.iter().zip(&a.retrieved).enumerate() {
            let name = a.dataset.get(i).cloned().unwrap_or_else(|| {
                orig.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default()
            });
            let report = audit_decay(&read_id_list(orig)?, &read_id_list(got)?, &name);
            if report.unknown_retrieved > 0 {
                eprintln!(
                    "{name}: {} retrieved ids are not in the original list",
                    report.unknown_retrieved
                );
            }
            if report.empty_original {
                eprintln!("{name}: original id list is empty");
            }
            reports.push(report);
        }
        let aggregate = aggregate_decay(&reports)?;
        let doc = serde_json::json!({ "reports": reports, "aggregate": aggregate });
        match &a.out {
            Some(out) if !self.dry_run => {
                write_json(out, &doc)?;
                let mut m = DatasetManifest::new(
                    a.dataset.join(","),
                    format!("{} id lists", a.orig.len()),
                    "audit-decay",
                );
                m.note("reports", reports.len());
                self.finish(m, &manifest_beside(out))
            }
            _ => {
                println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
                Ok(())
            }
        }
    }

    fn build_corpus(&self, a: &BuildCorpusArgs) -> Result<(), CliError> {
        let mut filtered = Vec::new();
        let mut raw_counts = BTreeMap::new();
        for entry in &a.sources {
            let (src, path) = entry
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("expected SOURCE=PATH, got {entry:?}")))?;
            let source: Source = src.parse()?;
            let pairs = load_corpus_pairs(Path::new(path), Some(source))?;
            raw_counts.insert(source.to_string(), pairs.len());
            filtered.push(filter_paraphrase_corpus(&pairs));
        }
        let merged = merge_corpora(filtered, a.dedup);
        let spec = self.split_spec(a.seed);
        let (train, dev, test) = split_dataset::<CorpusPair>(merged.pairs.clone(), &spec)?;
        if !self.dry_run {
            ensure_dir(&a.out_dir)?;
        }
        let mut m = DatasetManifest::new("paraphrase-corpus", a.sources.join(","), "build-corpus")
            .with_split(&spec);
        for (role, part) in [("train", &train), ("dev", &dev), ("test", &test)] {
            let path = a.out_dir.join(format!("{role}.jsonl"));
            let lines = self.write_records(&path, part)?;
            m.artifact(role, &path, lines);
        }
        m.note("input_pairs_per_source", &raw_counts);
        m.note("filtered_pairs_per_source", &merged.per_source);
        m.note("concatenated_total", merged.concatenated_total);
        m.note("dedup", a.dedup);
        m.note("duplicates_removed", merged.duplicates_removed);
        m.note("merged_total", merged.pairs.len());
        m.note("published_merged_total", PUBLISHED_MERGED_TOTAL);
        self.finish(m, &a.out_dir.join("manifest.json"))
    }

    fn generate(&self, a: &GenerateArgs) -> Result<(), CliError> {
        let mut params = self.cfg.generation.clone().unwrap_or_default();
        if let Some(v) = a.num_return {
            params.num_return = v;
        }
        if let Some(v) = a.top_p {
            params.top_p = v;
        }
        if let Some(v) = a.max_length {
            params.max_length = v;
        }
        if a.gen_seed.is_some() {
            params.seed = a.gen_seed;
        }
        params.validate()?;
        let records: Vec<TweetRecord> = read_jsonl(&a.input)?;
        let backend = a
            .backend
            .clone()
            .or_else(|| self.cfg.backend.clone())
            .ok_or_else(|| CliError::Config("no backend URL (--backend or PARADECAY_BACKEND_URL)".into()))?;
        if self.dry_run {
            let plan = serde_json::json!({
                "command": "generate", "dry_run": true,
                "planned": { "requests": records.len() }, "backend": backend, "params": params,
            });
            println!("{}", serde_json::to_string_pretty(&plan).expect("plan serializes"));
            return Ok(());
        }
        let client = GenerationClient::new(HttpTransport::new(&backend, Duration::from_secs(a.timeout)));
        client.health()?;
        let report = batch_generate(&client, &records, &params, a.concurrency, &a.out)?;
        if !report.failures.is_empty() {
            eprintln!("{} records failed; see the manifest", report.failures.len());
        }
        let lines = crate::corpusio::count_lines(&a.out)?;
        let mut m = DatasetManifest::new(dataset_tag(&records), describe(&a.input), "generate");
        m.seed = params.seed;
        m.artifact("candidates", &a.out, lines);
        m.note("generation", &params);
        m.note("backend", &backend);
        m.note("report", &report);
        self.finish(m, &manifest_beside(&a.out))
    }

    fn para_clean(&self, a: &ParaCleanArgs) -> Result<(), CliError> {
        let mut fcfg: FilterConfig = self.cfg.filter.clone().unwrap_or_default();
        if let Some(v) = a.copy_threshold {
            fcfg.copy_threshold = v;
        }
        if let Some(v) = a.dedup_threshold {
            fcfg.dedup_threshold = v;
        }
        if let Some(v) = a.floor {
            fcfg.floor_similarity = v;
        }
        if let Some(v) = a.ngram_order {
            fcfg.ngram_order = v;
        }
        fcfg.validate()?;

        let mut m;
        let sets: Vec<ParaphraseSet> = match &a.dataset_file {
            Some(ds) => {
                let originals: Vec<TweetRecord> = read_jsonl(ds)?;
                let load = load_candidates_file(&a.input, &originals)?;
                if !load.unknown_ids.is_empty() {
                    eprintln!("{} candidate ids are not in the dataset", load.unknown_ids.len());
                }
                m = DatasetManifest::new(dataset_tag(&originals), describe(&a.input), "para-clean");
                m.note("unknown_ids", &load.unknown_ids);
                m.note("missing_ids", &load.missing_ids);
                load.sets
            }
            None => {
                let sets: Vec<ParaphraseSet> = read_jsonl(&a.input)?;
                let name = sets.first().map(|s| s.original.dataset.clone()).unwrap_or_default();
                m = DatasetManifest::new(name, describe(&a.input), "para-clean");
                sets
            }
        };
        let clean = build_para_clean(&sets, &fcfg);
        let lines = self.write_records(&a.out, &clean)?;
        m = m.with_filter(&fcfg);
        m.artifact("para_clean", &a.out, lines);
        m.note("stats", filter_stats(&clean));
        self.finish(m, &manifest_beside(&a.out))
    }

    fn select_para_n(&self, a: &SelectParaNArgs) -> Result<(), CliError> {
        let clean: Vec<ParaphraseSet> = read_jsonl(&a.input)?;
        let n = a.n as usize;
        let rows = select_para_n(&clean, n);
        let shortfall = clean.iter().filter(|s| s.kept().count() < n).count();
        let lines = self.write_records(&a.out, &rows)?;
        let name = clean.first().map(|s| s.original.dataset.clone()).unwrap_or_default();
        let mut m = DatasetManifest::new(name, describe(&a.input), "select-para-n");
        m.artifact("para_n", &a.out, lines);
        m.note("n", n);
        m.note("originals", clean.len());
        m.note("originals_short_of_n", shortfall);
        m.note("selection", "first-n-kept-in-generation-order");
        self.finish(m, &manifest_beside(&a.out))
    }

    fn strip_emoji(&self, a: &StripEmojiArgs) -> Result<(), CliError> {
        let records: Vec<TweetRecord> = read_jsonl(&a.input)?;
        let mut with_emoji = 0;
        let mut emoji_total = 0;
        let mut dropped = Vec::new();
        let mut out = Vec::with_capacity(records.len());
        for r in &records {
            let n = count_emoji(&r.text);
            if n > 0 {
                with_emoji += 1;
                emoji_total += n;
            }
            let text = strip_emoji(&r.text);
            if text.is_empty() {
                dropped.push(r.id.clone());
            } else {
                out.push(TweetRecord { text, ..r.clone() });
            }
        }
        let lines = self.write_records(&a.out, &out)?;
        let mut m = DatasetManifest::new(dataset_tag(&records), describe(&a.input), "strip-emoji");
        m.artifact("stripped", &a.out, lines);
        m.note("records", records.len());
        m.note("records_with_emoji", with_emoji);
        m.note("emoji_total", emoji_total);
        m.note("dropped_empty", &dropped);
        self.finish(m, &manifest_beside(&a.out))
    }

    fn metrics(&self, a: &MetricsArgs) -> Result<(), CliError> {
        #[derive(serde::Deserialize)]
        struct Prediction {
            #[allow(dead_code)]
            id: serde_json::Value,
            gold: String,
            predicted: String,
        }

        let mut runs: Vec<BTreeMap<String, f64>> = Vec::new();
        let mut run_index: BTreeMap<String, usize> = BTreeMap::new();
        for entry in &a.predictions {
            let (dataset, path) = entry
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("expected DATASET=PATH, got {entry:?}")))?;
            let spec = self.cfg.dataset(dataset)?;
            let preds: Vec<Prediction> = read_jsonl(Path::new(path))?;
            let gold: Vec<&str> = preds.iter().map(|p| p.gold.as_str()).collect();
            let pred: Vec<&str> = preds.iter().map(|p| p.predicted.as_str()).collect();
            let classes: Vec<&str> = spec.classes.iter().map(String::as_str).collect();
            let score = macro_f1(&gold, &pred, &classes)?;
            let k = run_index.entry(dataset.to_string()).or_insert(0);
            if runs.len() <= *k {
                runs.push(BTreeMap::new());
            }
            runs[*k].insert(dataset.to_string(), score);
            *k += 1;
        }

        let mut doc = serde_json::Map::new();
        let mut rendered = String::new();
        if !runs.is_empty() {
            let table = ScoreTable::from_runs(runs)?;
            let avg = global_average(&table)?;
            rendered = render_table(&[("macro-F1", &table)]);
            doc.insert("table".into(), serde_json::to_value(&table).expect("table serializes"));
            doc.insert("global_average".into(), avg.into());
        }
        if let (Some(refs), Some(hyps)) = (&a.bleu_refs, &a.bleu_hyps) {
            let tokenized = |p: &Path| -> Result<Vec<Vec<String>>, CliError> {
                let f = std::fs::File::open(p).map_err(|e| CorpusError::io(p, e))?;
                std::io::BufReader::new(f)
                    .lines()
                    .map(|l| {
                        l.map(|l| l.split_whitespace().map(str::to_string).collect())
                            .map_err(|e| CorpusError::io(p, e).into())
                    })
                    .collect()
            };
            let bleu = corpus_bleu(&tokenized(refs)?, &tokenized(hyps)?, 4, Smoothing::None)?;
            rendered.push_str(&format!("BLEU ({BLEU_VARIANT}): {:.2}\n", bleu.score * 100.0));
            doc.insert("bleu".into(), serde_json::to_value(&bleu).expect("bleu serializes"));
        }
        if doc.is_empty() {
            return Err(CliError::Config("nothing to score: give --pred or --bleu-refs/--bleu-hyps".into()));
        }
        match &a.table {
            Some(p) if !self.dry_run => {
                std::fs::write(p, &rendered).map_err(|e| CorpusError::io(p, e))?
            }
            _ => print!("{rendered}"),
        }
        if let Some(out) = &a.out {
            if !self.dry_run {
                write_json(out, &doc)?;
            }
            let mut m = DatasetManifest::new("", format!("{} prediction files", a.predictions.len()), "metrics");
            m.note("inputs", &a.predictions);
            self.finish(m, &manifest_beside(out))?;
        }
        Ok(())
    }

    fn export_train_config(&self, a: &ExportTrainConfigArgs) -> Result<(), CliError> {
        let cfg = TrainingConfigExport::default();
        cfg.validate().map_err(CliError::Config)?;
        if !self.dry_run {
            write_json(&a.out, &cfg)?;
        }
        let mut m = DatasetManifest::new("", "built-in defaults", "export-train-config");
        m.note("generation", crate::genclient::GenerationParams::default());
        self.finish(m, &manifest_beside(&a.out))
    }
}
