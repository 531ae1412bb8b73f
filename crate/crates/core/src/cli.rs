use std::ffi::OsString;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use mcforge::config::Config;
use mcforge::ontology::FetchOptions;
use mcforge::report::{ingest_manifest, IngestOptions, Ingested, ReportError, SessionConfig};
use mcforge::service::{self, AppState};
use mcforge::syntax::ExportFormat;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mcforge", version, about = "Publish annotated model cards as linked RDF")]
struct Cli {
    /// Engine configuration file (TOML key = value pairs).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode a snippet manifest and write the linked report.
    Publish(PublishArgs),
    /// Run the HTTP API.
    Serve(ServeArgs),
    /// Check a manifest against its ontology without writing anything.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct OntologyArgs {
    /// Ontology URL or path; overrides the manifest's "ontology" field.
    #[arg(long, value_name = "URL|PATH")]
    ontology: Option<String>,
    /// Never touch the network; remote ontologies must be cached.
    #[arg(long)]
    offline: bool,
    #[arg(long, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PublishArgs {
    #[command(flatten)]
    ontology: OntologyArgs,
    /// Snippet manifest (JSON).
    #[arg(long, value_name = "MANIFEST")]
    input: PathBuf,
    /// One of: turtle, rdf, owl, json.
    #[arg(long)]
    format: String,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Fail when encoding produces warnings such as orphaned snippets.
    #[arg(long)]
    strict: bool,
    /// Namespace for minted individuals.
    #[arg(long, value_name = "IRI")]
    base_iri: Option<String>,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
    /// Directory of static files served next to the API.
    #[arg(long, value_name = "DIR")]
    ui_dir: Option<PathBuf>,
    /// Allowed browser origin; repeatable, `*` for any.
    #[arg(long = "cors-origin", value_name = "ORIGIN")]
    cors_origins: Vec<String>,
    #[arg(long)]
    offline: bool,
    #[arg(long, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[command(flatten)]
    ontology: OntologyArgs,
    #[arg(long, value_name = "MANIFEST")]
    input: PathBuf,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        let code = match &e {
            ReportError::Fetch(f) if !f.is_parse_error() => EXIT_IO,
            ReportError::Io { .. } => EXIT_IO,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

pub fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = load_config(cli.config.as_deref()).and_then(|config| match cli.command {
        Command::Publish(args) => publish(config, args),
        Command::Serve(args) => serve(config, args),
        Command::Validate(args) => validate(config, args),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<Config, Failure> {
    match path {
        None => Ok(Config::default()),
        Some(p) => Config::load(p).map_err(|e| Failure {
            code: match e {
                mcforge::config::ConfigError::Io { .. } => EXIT_IO,
                mcforge::config::ConfigError::Invalid { .. } => EXIT_INVALID,
            },
            message: e.to_string(),
        }),
    }
}

fn ingest(config: &Config, args: &OntologyArgs, input: &Path, base_iri: Option<String>) -> Result<Ingested, Failure> {
    let opts = IngestOptions {
        fetch: Some(FetchOptions::new(
            args.cache_dir.clone().unwrap_or_else(|| config.cache_dir.clone()),
            args.offline,
        )),
        session: SessionConfig {
            reasoner: config.reasoner.clone(),
            root_class: config.root_class.clone(),
            base_iri,
        },
        ontology_override: args.ontology.clone(),
    };
    let ingested = ingest_manifest(input, &opts)?;
    for w in ingested.ontology.warnings.iter().chain(ingested.session.ontology().warnings()) {
        eprintln!("warning: {w}");
    }
    Ok(ingested)
}

fn publish(config: Config, args: PublishArgs) -> Result<(), Failure> {
    let format: ExportFormat = args.format.parse().map_err(|e: mcforge::syntax::SyntaxError| Failure::invalid(e.to_string()))?;
    let Ingested { mut session, .. } = ingest(&config, &args.ontology, &args.input, args.base_iri.clone())?;
    let result = session.encode()?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    if args.strict && !result.warnings.is_empty() {
        return Err(Failure::invalid(format!(
            "{} warning(s) with --strict; nothing written",
            result.warnings.len()
        )));
    }
    let body = session.export(format)?;
    std::fs::write(&args.out, body).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", args.out.display()),
    })?;
    println!(
        "wrote {} ({}): {} snippet(s), {} link(s), {} orphan(s)",
        args.out.display(),
        format.token(),
        session.snippets().len(),
        result.pairs.len(),
        result.orphans.len()
    );
    Ok(())
}

fn validate(config: Config, args: ValidateArgs) -> Result<(), Failure> {
    let ingested = ingest(&config, &args.ontology, &args.input, None)?;
    println!(
        "{}: {} snippet(s) annotated with classes of {}",
        args.input.display(),
        ingested.session.snippets().len(),
        ingested.ontology.handle.origin
    );
    Ok(())
}

fn serve(mut config: Config, args: ServeArgs) -> Result<(), Failure> {
    if let Some(dir) = args.cache_dir {
        config.cache_dir = dir;
    }
    config.cors_origins.extend(args.cors_origins);
    if let Some(dir) = &args.ui_dir {
        if !dir.is_dir() {
            return Err(Failure {
                code: EXIT_IO,
                message: format!("UI directory {} does not exist", dir.display()),
            });
        }
    }
    let state = Arc::new(AppState::new(config, args.offline));
    let app = service::router(state, args.ui_dir);
    let addr = SocketAddr::new(args.host, args.port);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure {
        code: EXIT_IO,
        message: e.to_string(),
    })?;
    runtime.block_on(service::serve(addr, app)).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("{addr}: {e}"),
    })
}
