use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "rayvex", version, about = "Convex envelopes of ray-concave functions over polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the envelope hypotheses and write the certification report.
    Certify(ModelArgs),
    /// Evaluate the envelope, its region and gradient at given points.
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        /// Comma-separated coordinates; repeatable.
        #[arg(long = "point", required = true, value_parser = parse_point, allow_hyphen_values = true)]
        points: Vec<Vec<f64>>,
    },
    /// Evaluate f and the envelope on a bounding-box lattice intersected with P.
    Grid {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 21, value_parser = clap::value_parser!(u32).range(2..))]
        resolution: u32,
    },
    /// Export the planar region subdivision of the working polytope.
    Regions(ModelArgs),
    /// Compare the envelope with the sampled convex-hull oracle.
    Compare {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 21, value_parser = clap::value_parser!(u32).range(2..))]
        resolution: u32,
        /// Oracle sampling density; 0 uses the vertices only.
        #[arg(long, default_value_t = 10)]
        density: usize,
    },
    /// List the built-in functions and their parameters.
    Catalog(OutputArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SenseArg {
    Convex,
    Concave,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Model descriptor JSON; other model flags override its fields.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Catalog function name.
    #[arg(long)]
    pub function: Option<String>,
    /// Function parameter `key=value`; repeatable.
    #[arg(long = "param", value_parser = parse_param, allow_hyphen_values = true)]
    pub params: Vec<(String, f64)>,
    #[arg(long, allow_hyphen_values = true)]
    pub lx: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub ly: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub ux: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub uy: Option<f64>,
    /// Polytope JSON file replacing the function's default domain.
    #[arg(long)]
    pub polytope: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub sense: Option<SenseArg>,
    /// `none`, `origin`, or a comma-separated translation point.
    #[arg(long, allow_hyphen_values = true)]
    pub anchor: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample budget per certification check.
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn parse_point(s: &str) -> Result<Vec<f64>, String> {
    let coords: Result<Vec<f64>, _> = s.split(',').map(|c| c.trim().parse::<f64>()).collect();
    match coords {
        Ok(v) if v.iter().all(|c| c.is_finite()) => Ok(v),
        Ok(_) => Err(format!("non-finite coordinate in `{s}`")),
        Err(e) => Err(format!("bad point `{s}`: {e}")),
    }
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (key, value) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let value: f64 = value.trim().parse().map_err(|e| format!("bad value for `{key}`: {e}"))?;
    Ok((key.trim().to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_and_params() {
        assert_eq!(parse_point("1, -2.5").unwrap(), vec![1.0, -2.5]);
        assert!(parse_point("1,x").is_err());
        assert!(parse_point("nan,1").is_err());
        assert_eq!(parse_param("ux=1.5").unwrap(), ("ux".to_string(), 1.5));
        assert!(parse_param("ux").is_err());
    }

    #[test]
    fn grid_resolution_must_be_at_least_two() {
        assert!(Cli::try_parse_from(["rayvex", "grid", "--function", "bilinear", "--resolution", "1"]).is_err());
        let cli = Cli::try_parse_from(["rayvex", "grid", "--function", "bilinear", "--resolution", "2"]).unwrap();
        assert!(matches!(cli.command, Command::Grid { resolution: 2, .. }));
    }

    #[test]
    fn negative_bounds_parse() {
        let cli = Cli::try_parse_from(["rayvex", "certify", "--function", "bilinear", "--lx", "-1", "--anchor", "-1,0.5"])
            .unwrap();
        let Command::Certify(m) = cli.command else { panic!() };
        assert_eq!(m.lx, Some(-1.0));
        assert_eq!(m.anchor.as_deref(), Some("-1,0.5"));
    }

    #[test]
    fn command_is_required() {
        assert!(Cli::try_parse_from(["rayvex"]).is_err());
    }
}
