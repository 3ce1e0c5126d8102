use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use xtag::evaluation::BracketOptions;
use xtag::grammar::{load_grammar, validate_tree};
use xtag::lexicon::SyntDb;
use xtag::parser::{derived_tree, Derivation, StartCategory};
use xtag::pipeline::{Engine, PipelineConfig, PipelineError, ResourcePaths, TaggerMode};
use xtag::ranking::{rank, Weights};
use xtag::tagger::{n_best, parse_tagged_corpus, TrigramModel};
use xtag_cli::render::{derivation_svg, derived_svg};
use xtag_cli::server::{router, AppState};

#[derive(Parser)]
#[command(name = "xtag", version, about = "Lexicalized tree-adjoining grammar parser")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse sentences given as arguments, or one per stdin line.
    Parse(ParseArgs),
    /// Print the N best tag sequences.
    Tag {
        #[command(flatten)]
        resources: ResourceArgs,
        #[arg(short = 'n', long, default_value_t = 3)]
        n_best: usize,
        sentence: Vec<String>,
    },
    /// Show morphological and syntactic entries for words.
    Morph {
        #[command(flatten)]
        resources: ResourceArgs,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Parse a corpus and print a coverage row, plus bracket scores with --gold.
    Eval(EvalArgs),
    /// Serve the HTTP/JSON API.
    Serve {
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(short, long, default_value_t = 8080)]
        port: u16,
    },
    /// Load and check a grammar, templates and syntactic lexicon.
    ValidateGrammar {
        #[command(flatten)]
        resources: ResourceArgs,
    },
    /// Train a tagger model from a `word_TAG` corpus.
    Train {
        corpus: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Count trees in the best parses of a gold-tagged corpus.
    GenStats {
        #[command(flatten)]
        resources: ResourceArgs,
        corpus: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args, Clone, Default)]
struct ResourceArgs {
    #[arg(long)]
    trees: Option<PathBuf>,
    #[arg(long)]
    templates: Option<PathBuf>,
    #[arg(long)]
    morph: Option<PathBuf>,
    #[arg(long)]
    synt: Option<PathBuf>,
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Tagger model; trained on the bundled corpus when absent.
    #[arg(long)]
    model: Option<PathBuf>,
}

impl ResourceArgs {
    fn paths(&self) -> ResourcePaths {
        ResourcePaths {
            trees: self.trees.clone(),
            templates: self.templates.clone(),
            morph: self.morph.clone(),
            synt: self.synt.clone(),
            stats: self.stats.clone(),
            model: self.model.clone(),
        }
    }

    fn engine(&self) -> Result<Engine, Failure> {
        Engine::load(&self.paths()).map_err(|e| Failure::Config(e.into()))
    }
}

#[derive(Args, Clone)]
struct PipelineArgs {
    #[command(flatten)]
    resources: ResourceArgs,
    /// on, off or retry (blend first, parse unblended on failure).
    #[arg(long, default_value = "on")]
    tagger: TaggerMode,
    /// S, embedded-S, NP or DetP.
    #[arg(long, default_value = "S")]
    start: StartCategory,
    #[arg(long, default_value_t = 3)]
    n_best: usize,
    /// Trees kept per token by the frequency filter; 0 disables it.
    #[arg(short = 'k', long, default_value_t = 3)]
    stat_k: usize,
    /// Five comma-separated heuristic weights.
    #[arg(long, default_value = "1,1,1,1,1")]
    weights: Weights,
    /// Ranked parses reported per sentence.
    #[arg(long, default_value_t = 10)]
    max_parses: usize,
    #[arg(long, default_value_t = 1000)]
    extract_limit: usize,
}

impl PipelineArgs {
    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            tagger: self.tagger,
            start: self.start,
            n_best: self.n_best,
            stat_k: (self.stat_k > 0).then_some(self.stat_k),
            weights: self.weights,
            max_parses: self.max_parses,
            extract_limit: self.extract_limit,
            ..PipelineConfig::default()
        }
    }

    fn setup(&self) -> Result<(Engine, PipelineConfig), Failure> {
        let engine = self.resources.engine()?;
        let config = self.config();
        engine.validate(&config).map_err(|e| Failure::Config(e.into()))?;
        Ok((engine, config))
    }
}

#[derive(Args)]
struct ParseArgs {
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Print the response JSON, one object per line.
    #[arg(long)]
    json: bool,
    /// Write the top parse as SVG: PATH (derived tree) and PATH with a
    /// `.derivation.svg` suffix.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Append ranked derivations to a text file.
    #[arg(long)]
    save: Option<PathBuf>,
    /// Rank and replay derivations from a text file instead of parsing.
    #[arg(long, conflicts_with = "sentence")]
    load: Option<PathBuf>,
    sentence: Vec<String>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// One sentence per line.
    corpus: PathBuf,
    /// One bracketed tree per line, aligned with the corpus.
    #[arg(long)]
    gold: Option<PathBuf>,
    /// Report name; defaults to the corpus file stem.
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    labeled: bool,
    /// Leave out the span covering the whole sentence.
    #[arg(long)]
    no_root: bool,
    #[arg(long, default_value_t = 2)]
    min_width: usize,
    /// Print per-sentence outcomes as JSON lines.
    #[arg(long)]
    verbose: bool,
}

/// `println!` that reports a closed stdout as an error instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(std::io::stdout().lock(), $($arg)*).map_err(|e| Failure::Other(e.into()))?
    };
}

/// Exit status classes: configuration problems exit 2, no-parse exits 1.
enum Failure {
    Config(anyhow::Error),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        if e.is_config() {
            Failure::Config(e.into())
        } else {
            Failure::Other(e.into())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure::Config(e)) => {
            eprintln!("xtag: configuration error: {e:#}");
            ExitCode::from(2)
        }
        // a closed downstream pipe (`xtag parse | head`) is not an error
        Err(Failure::Other(e))
            if e.chain().any(|c| c.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)) =>
        {
            ExitCode::SUCCESS
        }
        Err(Failure::Other(e)) => {
            eprintln!("xtag: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(Failure::Config)
}

fn input_sentences(args: &[String]) -> Result<Vec<String>> {
    if !args.is_empty() {
        return Ok(vec![args.join(" ")]);
    }
    let mut out = Vec::new();
    for line in std::io::stdin().lock().lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(line.trim().to_string());
        }
    }
    Ok(out)
}

fn run(cmd: Command) -> Result<ExitCode, Failure> {
    match cmd {
        Command::Parse(args) => cmd_parse(args),
        Command::Tag { resources, n_best: n, sentence } => {
            let engine = resources.engine()?;
            for s in input_sentences(&sentence)? {
                let words: Vec<String> = s.split_whitespace().map(String::from).collect();
                out!("{s}");
                for seq in n_best(&engine.model, &words, n).map_err(|e| Failure::Other(e.into()))? {
                    let tagged: Vec<String> = words.iter().zip(&seq.tags).map(|(w, t)| format!("{w}_{t}")).collect();
                    out!("  {:.4}\t{}", seq.log_prob, tagged.join(" "));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Morph { resources, words } => {
            let engine = resources.engine()?;
            let lex = &engine.bundle.lexicon;
            for w in words {
                let entries = lex.morph.lookup(&w);
                if entries.is_empty() {
                    out!("{w}\t(unknown: {})", xtag::lexicon::default_pos(&w, false).iter().map(|p| p.code()).collect::<Vec<_>>().join(" "));
                }
                for e in entries {
                    let feats = if e.features.is_empty() { "-".to_string() } else { e.features.join(",") };
                    out!("{w}\t{}\t{}\t{feats}", e.root, e.pos);
                    for s in lex.synt.lookup(&e.root, e.pos) {
                        out!("\t{}\t{}", s.index, s.tree_names(&engine.bundle.grammar).join(" "));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval(args) => cmd_eval(args),
        Command::Serve { pipeline, host, port } => {
            let (engine, config) = pipeline.setup()?;
            let app = router(Arc::new(AppState { engine, config }));
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Other(e.into()))?;
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind((host.as_str(), port))
                    .await
                    .with_context(|| format!("cannot bind {host}:{port}"))
                    .map_err(Failure::Config)?;
                eprintln!("xtag: listening on http://{}", listener.local_addr().map_err(|e| Failure::Other(e.into()))?);
                axum::serve(listener, app).await.map_err(|e| Failure::Other(e.into()))
            })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ValidateGrammar { resources } => {
            let trees = resources.trees.as_deref().map(read).transpose()?;
            let templates = resources.templates.as_deref().map(read).transpose()?;
            let grammar = load_grammar(
                trees.as_deref().unwrap_or(xtag::data::english::TREES),
                templates.as_deref().unwrap_or(xtag::data::english::TEMPLATES),
            )
            .map_err(|e| Failure::Config(e.into()))?;
            let mut problems = 0;
            for t in grammar.trees() {
                if let Err(vs) = validate_tree(t) {
                    for v in vs {
                        problems += 1;
                        out!("{}: {v}", t.name);
                    }
                }
            }
            let synt_text = resources.synt.as_deref().map(read).transpose()?;
            let synt = SyntDb::parse(synt_text.as_deref().unwrap_or(xtag::data::english::SYNT))
                .map_err(|e| Failure::Config(e.into()))?;
            if let Err(e) = synt.check(&grammar) {
                problems += 1;
                out!("lexicon: {e}");
            }
            out!(
                "{} trees ({} in {} families), {} templates, {} lexicon entries, {problems} problems",
                grammar.tree_count(),
                grammar.tree_count() - grammar.individual_tree_count(),
                grammar.families().len(),
                grammar.templates().len(),
                synt.len()
            );
            Ok(if problems == 0 { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Train { corpus, output } => {
            let text = read(&corpus)?;
            let sents = parse_tagged_corpus(&text).map_err(|e| Failure::Config(e.into()))?;
            let model = TrigramModel::train(&sents).map_err(|e| Failure::Config(e.into()))?;
            std::fs::write(&output, model.to_text()).with_context(|| format!("cannot write {}", output.display()))?;
            eprintln!("trained on {} sentences, {} word types", sents.len(), model.vocabulary_size());
            Ok(ExitCode::SUCCESS)
        }
        Command::GenStats { resources, corpus, output } => {
            let engine = resources.engine()?;
            let sents = parse_tagged_corpus(&read(&corpus)?).map_err(|e| Failure::Config(e.into()))?;
            let stats = engine.tree_stats(&sents, StartCategory::S)?;
            let body = format!("; tree\tPOS\tcount from best parses of {} sentences\n{}", sents.len(), stats.to_text());
            std::fs::write(&output, body).with_context(|| format!("cannot write {}", output.display()))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn write_svgs(base: &Path, index: Option<usize>, d: &Derivation, tree: &xtag::grammar::ParseTree) -> Result<()> {
    let stem = match index {
        Some(i) => base.with_extension(format!("{i}.svg")),
        None => base.to_path_buf(),
    };
    std::fs::write(&stem, derived_svg(tree)).with_context(|| format!("cannot write {}", stem.display()))?;
    let deriv = stem.with_extension("derivation.svg");
    std::fs::write(&deriv, derivation_svg(d)).with_context(|| format!("cannot write {}", deriv.display()))?;
    Ok(())
}

fn cmd_parse(args: ParseArgs) -> Result<ExitCode, Failure> {
    let (engine, config) = args.pipeline.setup()?;
    if let Some(path) = &args.load {
        return cmd_load(&engine, &config, path, &args);
    }
    let sentences = input_sentences(&args.sentence)?;
    let many = sentences.len() > 1;
    let mut saved = String::new();
    let mut all_parsed = true;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for (i, s) in sentences.iter().enumerate() {
        let resp = engine.parse_sentence(&config, s).map_err(|e| Failure::from(PipelineError::Sentence { id: i, source: Box::new(e) }))?;
        all_parsed &= resp.accepted();
        if args.json {
            writeln!(out, "{}", resp.to_json()).map_err(|e| Failure::Other(e.into()))?;
        } else {
            let flag = if resp.retry { " (retry)" } else { "" };
            writeln!(out, "{}\t{} parse(s){flag}", resp.sentence, resp.derivation_count).map_err(|e| Failure::Other(e.into()))?;
            for t in resp.tokens.iter().filter(|t| t.info.unknown) {
                writeln!(out, "  unknown word {:?} treated as {}", t.info.word, t.used.iter().map(|p| p.code()).collect::<Vec<_>>().join("/"))
                    .map_err(|e| Failure::Other(e.into()))?;
            }
            for p in &resp.parses {
                writeln!(out, "  {}. {:?} {}\n     {}", p.id + 1, p.penalties.components(), p.derivation, p.bracketed)
                    .map_err(|e| Failure::Other(e.into()))?;
            }
        }
        if args.save.is_some() {
            saved.push_str(&format!("; {}\n", resp.sentence));
            for p in &resp.parses {
                saved.push_str(&p.derivation);
                saved.push('\n');
            }
        }
        if let (Some(base), Some(top)) = (&args.svg, resp.parses.first()) {
            write_svgs(base, many.then_some(i), &top.derivation_tree, &top.derived)?;
        }
    }
    if let Some(path) = &args.save {
        std::fs::write(path, saved).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(if all_parsed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

/// Derivations from a saved file: `;` lines start a new group.
fn cmd_load(engine: &Engine, config: &PipelineConfig, path: &Path, args: &ParseArgs) -> Result<ExitCode, Failure> {
    let text = read(path)?;
    let mut groups: Vec<(String, Vec<Derivation>)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(title) = line.strip_prefix(';') {
            groups.push((title.trim().to_string(), Vec::new()));
        } else if !line.is_empty() {
            let d: Derivation = line.parse().with_context(|| format!("{}:{}", path.display(), i + 1)).map_err(Failure::Config)?;
            if groups.is_empty() {
                groups.push((String::new(), Vec::new()));
            }
            groups.last_mut().expect("group exists").1.push(d);
        }
    }
    let grammar = &engine.bundle.grammar;
    for (i, (title, ds)) in groups.iter().enumerate() {
        let ranked = rank(ds, grammar, &config.weights, Some(config.max_parses)).map_err(|e| Failure::Other(e.into()))?;
        out!("{title}\t{} derivation(s)", ds.len());
        for (j, p) in ranked.parses.iter().enumerate() {
            let tree = derived_tree(&p.derivation, grammar).map_err(|e| Failure::Other(e.into()))?;
            out!("  {}. {:?} {}\n     {}", j + 1, p.penalties.components(), p.derivation, tree.to_bracketed());
            if j == 0 {
                if let Some(base) = &args.svg {
                    write_svgs(base, (groups.len() > 1).then_some(i), &p.derivation, &tree)?;
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode, Failure> {
    let (engine, config) = args.pipeline.setup()?;
    let corpus = read(&args.corpus)?;
    let gold = args.gold.as_deref().map(read).transpose()?;
    let name = args
        .name
        .clone()
        .unwrap_or_else(|| args.corpus.file_stem().map_or("corpus".into(), |s| s.to_string_lossy().into_owned()));
    let opts = BracketOptions { labeled: args.labeled, include_full_span: !args.no_root, min_width: args.min_width };
    let report = engine.evaluate(&config, &name, &corpus, gold.as_deref(), opts).map_err(|e| match e {
        PipelineError::GoldCount { .. } | PipelineError::Eval(_) => Failure::Config(e.into()),
        e => Failure::from(e),
    })?;
    if args.verbose {
        for o in &report.outcomes {
            out!("{}", serde_json::to_string(o).map_err(|e| Failure::Other(e.into()))?);
        }
    }
    print!("{report}");
    if report.outcomes.iter().any(|o| o.error.is_some()) {
        for o in report.outcomes.iter().filter_map(|o| o.error.as_ref()) {
            eprintln!("xtag: {o}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
