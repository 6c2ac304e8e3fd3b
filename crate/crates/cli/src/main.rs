//! `pointvos`: point sampling, dataset tooling, evaluation, loss checks and
//! the verification server.

mod dataset;
mod eval;
mod loss;
mod sample;
mod tree;

use std::net::SocketAddr;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};
use pointvos_core::Execution;

#[derive(Debug, Parser)]
#[command(name = "pointvos", version, about)]
struct Cli {
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    #[command(subcommand)]
    Sample(sample::SampleCmd),
    #[command(subcommand)]
    Dataset(dataset::DatasetCmd),
    #[command(subcommand)]
    Eval(eval::EvalCmd),
    #[command(subcommand)]
    Loss(loss::LossCmd),
    /// Serve the verification API and frame images.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long, env = "POINTVOS_DATA_ROOT", default_value = "data")]
        data_root: PathBuf,
    },
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    match cli.cmd {
        Cmd::Sample(c) => sample::run(c, exec),
        Cmd::Dataset(c) => dataset::run(c, exec),
        Cmd::Eval(c) => eval::run(c, exec),
        Cmd::Loss(c) => loss::run(c),
        Cmd::Serve { port, host, data_root } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(pointvos_verify::http::serve(SocketAddr::new(host, port), data_root))?;
            Ok(())
        }
    }
}
