use anyhow::{bail, Context, Result};
use rayvex::descriptor::{AnchorSpec, ModelDescriptor, PolytopeDocument, PolytopeSource, ResolvedModel};
use rayvex::{CertifyConfig, EnvelopeModel, Sense};

use crate::args::{parse_point, ModelArgs, SenseArg};

/// Merges the descriptor file (if any) with the command-line flags.
pub fn descriptor(args: &ModelArgs) -> Result<ModelDescriptor> {
    let mut desc = match &args.model {
        Some(path) => ModelDescriptor::load(path).with_context(|| format!("reading model {}", path.display()))?,
        None => match &args.function {
            Some(name) => ModelDescriptor::named(name.clone()),
            None => bail!("either --function or --model is required"),
        },
    };
    if let (Some(name), Some(_)) = (&args.function, &args.model) {
        if *name != desc.function.name {
            desc.function.name = name.clone();
            desc.function.params.clear();
        }
    }
    for (key, value) in &args.params {
        desc.function.params.insert(key.clone(), *value);
    }
    for (key, value) in [("lx", args.lx), ("ly", args.ly), ("ux", args.ux), ("uy", args.uy)] {
        if let Some(v) = value {
            desc.function.params.insert(key.to_string(), v);
        }
    }
    if let Some(path) = &args.polytope {
        let doc = PolytopeDocument::load(path).with_context(|| format!("reading polytope {}", path.display()))?;
        desc.polytope = Some(PolytopeSource::Inline(doc));
    }
    if let Some(sense) = args.sense {
        desc.sense = Some(match sense {
            SenseArg::Convex => Sense::Convex,
            SenseArg::Concave => Sense::Concave,
        });
    }
    if let Some(anchor) = &args.anchor {
        desc.anchor = Some(parse_anchor(anchor)?);
    }
    Ok(desc)
}

fn parse_anchor(s: &str) -> Result<AnchorSpec> {
    Ok(match s {
        "none" | "origin" | "origin-shift" => AnchorSpec::Named(s.to_string()),
        _ => AnchorSpec::Point(parse_point(s).map_err(anyhow::Error::msg)?),
    })
}

pub fn resolve(args: &ModelArgs) -> Result<ResolvedModel> {
    let desc = descriptor(args)?;
    let base = args.model.as_ref().and_then(|p| p.parent().map(|d| d.to_path_buf()));
    desc.resolve(base.as_deref()).context("resolving model")
}

pub fn config(args: &ModelArgs) -> CertifyConfig {
    CertifyConfig {
        budget: args.budget,
        seed: args.seed,
        ..CertifyConfig::default()
    }
}

/// Builds the model and warns on standard error when it is not certified.
pub fn build(args: &ModelArgs) -> Result<(ResolvedModel, EnvelopeModel)> {
    let resolved = resolve(args)?;
    let model = resolved.build(&config(args))?;
    if !model.is_certified() {
        eprintln!(
            "warning: `{}` fails {:?}; values are the secant interpolant, not a certified envelope",
            resolved.entry.name,
            model.certification().failures()
        );
    }
    for w in &model.polytope().validation().warnings {
        eprintln!("warning: {w}");
    }
    Ok((resolved, model))
}
