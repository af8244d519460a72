use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use relocviz_service::api::{self, AppState};
use relocviz_service::commands::{
    self, cmd_render, cmd_validate, cmd_vectorize, CliError, DatasetPaths, RenderOptions,
    EXIT_INVALID,
};
use relocviz_service::config::{ServiceConfig, DEFAULT_PORT};

/// Flow maps of relocations between the buildings of a map.
#[derive(Parser)]
#[command(name = "relocviz", version)]
struct Cli {
    /// Flat `key = value` file with dataset paths, port and style/arc
    /// parameter overrides.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one config key, e.g. `--set s0=0.2`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    sets: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a PPM map image into a polygon file.
    Vectorize {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Largest per-channel difference snapped to an earlier color.
        #[arg(long, default_value_t = 0)]
        snap: u8,
        /// Drop regions with fewer pixels.
        #[arg(long, default_value_t = 1)]
        min_area: usize,
    },
    /// Check the three dataset files and their join.
    Validate {
        #[command(flatten)]
        data: DatasetArgs,
    },
    /// Write one view as a static SVG.
    Render {
        #[command(flatten)]
        data: DatasetArgs,
        /// First period index of the window.
        #[arg(long, default_value_t = 0)]
        from: usize,
        /// Last period index of the window; defaults to the last period.
        #[arg(long)]
        to: Option<usize>,
        #[arg(long, default_value_t = 1)]
        threshold: u64,
        /// Building names or ids, comma-separated or repeated.
        #[arg(long, value_delimiter = ',')]
        selected: Vec<String>,
        #[arg(long)]
        armed: Option<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Serve the HTTP API and the UI.
    Serve {
        #[command(flatten)]
        data: DatasetArgs,
        #[arg(long)]
        port: Option<u16>,
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        host: IpAddr,
        /// Directory of UI assets served at `/`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DatasetArgs {
    #[arg(long)]
    polygons: Option<PathBuf>,
    #[arg(long)]
    colors: Option<PathBuf>,
    #[arg(long)]
    relocations: Option<PathBuf>,
}

impl DatasetArgs {
    fn resolve(self, cfg: &ServiceConfig) -> Result<DatasetPaths, CliError> {
        let pick = |flag: Option<PathBuf>, from_cfg: &Option<PathBuf>, name: &str| {
            flag.or_else(|| from_cfg.clone()).ok_or_else(|| CliError {
                code: EXIT_INVALID,
                message: format!("missing --{name} (or `{name}` in the config file)"),
            })
        };
        Ok(DatasetPaths {
            polygons: pick(self.polygons, &cfg.polygons, "polygons")?,
            colors: pick(self.colors, &cfg.colors, "colors")?,
            relocations: pick(self.relocations, &cfg.relocations, "relocations")?,
        })
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let cfg = ServiceConfig::load(cli.config.as_deref(), &cli.sets).map_err(|e| CliError {
        code: EXIT_INVALID,
        message: e.to_string(),
    })?;
    match cli.command {
        Command::Vectorize {
            input,
            output,
            snap,
            min_area,
        } => cmd_vectorize(&input, &output, snap, min_area),
        Command::Validate { data } => cmd_validate(&data.resolve(&cfg)?),
        Command::Render {
            data,
            from,
            to,
            threshold,
            selected,
            armed,
            output,
        } => {
            let opts = RenderOptions {
                from,
                to,
                threshold,
                selected,
                armed,
            };
            cmd_render(&data.resolve(&cfg)?, &opts, &cfg.style, &cfg.arc, &output)
        }
        Command::Serve {
            data,
            port,
            host,
            static_dir,
        } => {
            let dataset = commands::load(&data.resolve(&cfg)?)?;
            let addr = SocketAddr::new(host, port.or(cfg.port).unwrap_or(DEFAULT_PORT));
            let state = Arc::new(AppState {
                dataset,
                style: cfg.style,
                arc: cfg.arc,
            });
            let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError {
                code: EXIT_INVALID,
                message: e.to_string(),
            })?;
            runtime
                .block_on(api::serve(state, static_dir.or(cfg.static_dir), addr))
                .map_err(|e| CliError {
                    code: EXIT_INVALID,
                    message: e.to_string(),
                })?;
            Ok(String::new())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(line) => {
            if !line.is_empty() {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
