use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::Parser;
use tracing_subscriber::EnvFilter;
use venue_service::{router, AppState};

/// Serve session recommendations for a conference dataset over HTTP.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// Address to listen on.
    #[arg(long, env = "VENUE_LISTEN", default_value = "127.0.0.1:8080")]
    listen: String,
    /// Dataset file to load at start-up.
    #[arg(long, env = "VENUE_DATA")]
    data: PathBuf,
    #[arg(long, env = "VENUE_GAMMA")]
    gamma: Option<f64>,
    #[arg(long, env = "VENUE_BETA")]
    beta: Option<f64>,
    #[arg(long, env = "VENUE_DELTA")]
    delta: Option<f64>,
    #[arg(long, env = "VENUE_TOP_N")]
    top_n: Option<usize>,
    /// Rewrite the dataset file after every accepted write.
    #[arg(long, env = "VENUE_SAVE_ON_WRITE")]
    save_on_write: bool,
}

#[tokio::main]
async fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_ansi(std::io::stderr().is_terminal())
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .init();
    let args = Args::parse();

    let mut conf = match venue_core::dataset::load(&args.data) {
        Ok(c) => c,
        Err(e) => {
            tracing::error!(error = %e, "cannot load dataset");
            return ExitCode::from(2);
        }
    };
    let t = &mut conf.thresholds;
    t.gamma = args.gamma.unwrap_or(t.gamma);
    t.beta = args.beta.unwrap_or(t.beta);
    t.delta = args.delta.unwrap_or(t.delta);
    t.top_n = args.top_n.unwrap_or(t.top_n);

    let state = match AppState::new(conf) {
        Ok(s) if args.save_on_write => s.save_on_write(args.data.clone()),
        Ok(s) => s,
        Err(e) => {
            tracing::error!(error = ?e, "dataset failed validation");
            return ExitCode::from(1);
        }
    };

    let listener = match tokio::net::TcpListener::bind(&args.listen).await {
        Ok(l) => l,
        Err(e) => {
            tracing::error!(error = %e, listen = %args.listen, "cannot bind");
            return ExitCode::from(2);
        }
    };
    tracing::info!(listen = %args.listen, data = %args.data.display(), "serving");
    let shutdown = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    if let Err(e) = axum::serve(listener, router(Arc::new(state)))
        .with_graceful_shutdown(shutdown)
        .await
    {
        tracing::error!(error = %e, "server error");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
