use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use adreach::corpus::{load_profiles, load_stop_words, read_utf8_file};
use adreach::datagen::{self, topology, PoolParams};
use adreach::dot::write_targets_dot;
use adreach::scoring::{present, write_scores_csv};
use adreach::{
    compare_methods, load_edge_list, rank_targets, score_all, AffinityTable64, Alpha, Corpus, Filter,
    Method, Ranking64, SocialGraph, TfIdfModel64, Tokenizer,
};
use serde_json::json;

use crate::config::{FilterMode, MethodArg, RunConfig};
use crate::{CliError, DotArgs, EvalArgs, GenArgs, RankArgs};

type CliResult<T> = Result<T, CliError>;

fn data_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| data_err(path, e))
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| data_err(dir, e))
}

fn write_json(path: &Path, value: &serde_json::Value) -> CliResult<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| data_err(path, e))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| data_err(path, e))
}

fn read_graph(path: &Path) -> CliResult<SocialGraph> {
    let f = File::open(path).map_err(|e| data_err(path, e))?;
    let g = load_edge_list(BufReader::new(f)).map_err(|e| data_err(path, e))?;
    if g.self_loops_dropped() > 0 {
        eprintln!("warning: {}: dropped {} self-loop(s)", path.display(), g.self_loops_dropped());
    }
    Ok(g)
}

struct Inputs {
    graph: SocialGraph,
    corpus: Corpus,
}

impl Inputs {
    /// Profile ids join the node set, so users without edges stay in play.
    fn load(cfg: &RunConfig) -> CliResult<Self> {
        let edges = read_graph(&cfg.graph_path)?;
        let profiles = load_profiles(&cfg.profiles_path)?;
        let brand = read_utf8_file(&cfg.brand_path)?;
        let tokenizer = match &cfg.stop_words_path {
            Some(p) => Tokenizer::new().with_stop_words(load_stop_words(p)?),
            None => Tokenizer::new(),
        };
        let ids: Vec<u64> = profiles.iter().map(|(id, _)| *id).collect();
        let corpus = Corpus::build(profiles, &brand, &tokenizer)?;
        let graph = SocialGraph::from_nodes_and_edges(ids, edges.edges().collect::<Vec<_>>());
        Ok(Self { graph, corpus })
    }

    fn affinities(&self) -> AffinityTable64 {
        let model = TfIdfModel64::fit(&self.corpus);
        let missing = self.graph.nodes().iter().filter(|&&n| !self.corpus.contains(adreach::DocId::Node(n))).count();
        if missing > 0 {
            eprintln!("warning: {missing} graph node(s) have no profile; their affinity is 0");
        }
        model.affinity_table(self.graph.nodes().iter().copied())
    }

    fn summary(&self) -> serde_json::Value {
        json!({
            "nodes": self.graph.node_count(),
            "edges": self.graph.edge_count(),
            "documents": self.corpus.m(),
            "vocabulary": self.corpus.vocabulary().len(),
            "empty_profiles": self.corpus.empty_documents().len(),
        })
    }
}

fn method_of(m: MethodArg) -> Method {
    match m {
        MethodArg::Affinity => Method::Affinity,
        MethodArg::Utility => Method::Utility,
    }
}

fn filter_of(mode: FilterMode, tau: f64) -> Filter<f64> {
    match mode {
        FilterMode::None => Filter::None,
        FilterMode::Affinity => Filter::MinAffinity(tau),
        FilterMode::Utility => Filter::MinUtility(tau),
    }
}

fn fmt_score(v: f64, round: Option<u32>) -> String {
    round.map_or_else(|| v.to_string(), |d| present(v, d))
}

fn print_ranking(r: &Ranking64, round: Option<u32>) {
    let header = ["rank", "node", "utility", "centrality", "affinity"];
    let rows: Vec<[String; 5]> = r
        .records
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            [
                (i + 1).to_string(),
                rec.node.to_string(),
                fmt_score(rec.utility, round),
                fmt_score(rec.centrality, round),
                fmt_score(rec.affinity, round),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: [&str; 5]| {
        let parts: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:>w$}")).collect();
        println!("{}", parts.join("  "));
    };
    line(header);
    for row in &rows {
        line([&row[0], &row[1], &row[2], &row[3], &row[4]]);
    }
}

fn ranked(cfg: &RunConfig, inputs: &Inputs, limit: usize) -> CliResult<Ranking64> {
    let aff = inputs.affinities();
    let scores = score_all(&inputs.graph, &aff, Alpha::new(cfg.alpha)?)?;
    Ok(rank_targets(&scores, method_of(cfg.method), limit, filter_of(cfg.filter, cfg.tau)))
}

pub fn rank(a: &RankArgs) -> CliResult<()> {
    let cfg = a.common.resolve(a.alpha, None, None, a.filter, a.method)?;
    let inputs = Inputs::load(&cfg)?;
    let full = ranked(&cfg, &inputs, usize::MAX)?;
    let top = &full.records[..cfg.k.min(full.len())];

    ensure_dir(&cfg.out)?;
    let scores_path = cfg.out.join("scores.csv");
    write_scores_csv(&full.records, create(&scores_path)?, None)?;
    let topk_path = cfg.out.join("topk.csv");
    write_scores_csv(top, create(&topk_path)?, None)?;
    let mut outputs = vec![scores_path, topk_path];
    if a.dump_vectors {
        let p = cfg.out.join("vectors.jsonl");
        TfIdfModel64::fit(&inputs.corpus).write_jsonl(create(&p)?)?;
        outputs.push(p);
    }
    write_json(
        &cfg.out.join("rank-manifest.json"),
        &json!({
            "command": "rank",
            "config": cfg,
            "inputs": inputs.summary(),
            "ranked": full.len(),
            "outputs": outputs,
        }),
    )?;
    let shown = Ranking64 { records: top.to_vec(), ..full };
    print_ranking(&shown, cfg.round);
    Ok(())
}

pub fn eval(a: &EvalArgs) -> CliResult<()> {
    let cfg = a.common.resolve(None, a.alphas.clone(), a.trials, None, None)?;
    let inputs = Inputs::load(&cfg)?;
    let aff = inputs.affinities();
    let report = compare_methods(&inputs.graph, &aff, &cfg.alphas, cfg.k, cfg.trials, cfg.tau, cfg.rng_seed)?;

    ensure_dir(&cfg.out)?;
    let report_path = cfg.out.join("report.csv");
    report.write_csv(create(&report_path)?, a.fractions)?;
    write_json(
        &cfg.out.join("eval-manifest.json"),
        &json!({
            "command": "eval",
            "config": cfg,
            "inputs": inputs.summary(),
            "outputs": [report_path],
        }),
    )?;
    match cfg.round {
        None => print!("{}", report.to_table()),
        Some(d) => {
            println!("{:<10} {:>6} {:>10} {:>10} {:>10}", "method", "alpha", "total", "direct", "neighbors");
            for row in &report.rows {
                println!(
                    "{:<10} {:>6} {:>10} {:>10} {:>10}",
                    row.method.name(),
                    row.method.alpha().map(|x| x.to_string()).unwrap_or_default(),
                    present(row.total(), d),
                    present(row.direct(), d),
                    present(row.from_neighborhoods(), d)
                );
            }
        }
    }
    Ok(())
}

pub fn export_dot(a: &DotArgs) -> CliResult<()> {
    let cfg = a.common.resolve(a.alpha, None, None, None, a.method)?;
    let inputs = Inputs::load(&cfg)?;
    let ranking = ranked(&cfg, &inputs, a.top_n)?;
    let label = a.brand_label.clone().unwrap_or_else(|| {
        cfg.brand_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "brand".into())
    });
    ensure_dir(&cfg.out)?;
    let path = cfg.out.join("targets.dot");
    let mut w = create(&path)?;
    write_targets_dot(&mut w, &inputs.graph, &ranking.node_ids(), &label)
        .and_then(|_| w.flush())
        .map_err(|e| data_err(&path, e))?;
    write_json(
        &cfg.out.join("export-dot-manifest.json"),
        &json!({
            "command": "export-dot",
            "config": cfg,
            "top_n": a.top_n,
            "brand_label": label,
            "targets": ranking.node_ids(),
            "outputs": [path],
        }),
    )?;
    println!("{}", path.display());
    Ok(())
}

const MAX_DEFAULT_PAGES_PER_TOPIC: usize = 300;

pub fn gen(a: &GenArgs) -> CliResult<()> {
    let (graph, topology_desc) = match (&a.nodes_from, a.nodes) {
        (Some(path), _) => (read_graph(path)?, json!({ "source": path })),
        (None, Some(n)) => (
            topology::preferential_attachment(n, a.attach, a.triad, a.seed)?,
            json!({ "generator": "preferential_attachment", "nodes": n, "attach": a.attach, "triad": a.triad, "seed": a.seed }),
        ),
        (None, None) => return Err(CliError::Usage("gen needs --nodes-from <edges> or --nodes <n>".into())),
    };
    if a.topics == 0 {
        return Err(CliError::Usage("--topics must be positive".into()));
    }
    if a.brand_topic >= a.topics {
        return Err(CliError::Usage(format!("--brand-topic {} must be below --topics {}", a.brand_topic, a.topics)));
    }
    let pages_per_topic = a.pages_per_topic.unwrap_or_else(|| {
        graph.node_count().div_ceil(a.topics).clamp(1, MAX_DEFAULT_PAGES_PER_TOPIC)
    });
    let params = PoolParams {
        num_topics: a.topics,
        pages_per_topic,
        vocab_per_topic: a.vocab_per_topic,
        shared_vocab: a.shared_vocab,
        doc_length: a.doc_length,
        topic_word_fraction: a.topic_fraction,
        intra_topic_link_prob: a.intra,
        inter_topic_link_prob: a.inter,
    };
    params.validate().map_err(|e| CliError::Usage(e.to_string()))?;

    let pool_seed = a.seed.wrapping_add(1);
    let assign_seed = a.seed.wrapping_add(2);
    let brand_seed = a.seed.wrapping_add(3);
    let pool = datagen::generate_topic_pool(params, pool_seed)?;
    let result = datagen::assign_contents(&graph, &pool, a.seeds, assign_seed)?;
    let brand = pool.brand_text(a.brand_topic, a.brand_length, brand_seed);

    let manifest = json!({
        "command": "gen",
        "topology": topology_desc,
        "nodes": graph.node_count(),
        "edges": graph.edge_count(),
        "pool": params,
        "seed": a.seed,
        "pool_seed": pool_seed,
        "assign_seed": assign_seed,
        "brand_seed": brand_seed,
        "num_seeds": a.seeds,
        "seed_nodes": result.seeds,
        "coverage": result.coverage,
        "reused_pages": result.reused_pages,
        "brand_topic": a.brand_topic,
        "brand_length": a.brand_length,
    });
    let paths = datagen::emit_dataset(&a.out, &graph, &result, &pool, &manifest)?;
    let brand_path: PathBuf = a.out.join("brand.txt");
    fs::write(&brand_path, format!("{brand}\n")).map_err(|e| data_err(&brand_path, e))?;
    println!(
        "wrote {} nodes, {} edges (coverage {}) to {}, {}, {}",
        graph.node_count(),
        graph.edge_count(),
        result.coverage,
        paths.edges.display(),
        paths.profiles.display(),
        brand_path.display()
    );
    Ok(())
}
