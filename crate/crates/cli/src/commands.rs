//! Subcommand implementations.

use quasirandom::chars::{character_table, conjugacy_classes};
use quasirandom::group::matrix::{MatrixGroup, MatrixKind};
use quasirandom::product::{
    alpha_exact, cover_exponent, fpf_triple_check, gowers_threshold, is_product_free, least_integer_above,
    min_proper_subgroup_index, product_free_search, psl_covering_check, quasirandomness_profile, triple_product_covers,
    ProfileConfig, SearchBudget, ALPHA_EXACT_MAX, C0,
};
use quasirandom::spectral::{mixing_triple_witness, verify_mixing_bound, Method, SpectralConfig};
use quasirandom::words::{
    parse_word, random_pair_generates, rs_fraction, waring_check, word_value_set, RsMode, ValueMode, WaringConfig, Word,
};
use quasirandom::{Error, Family, FiniteGroup, Limits, Result};
use serde_json::{json, Value};

use crate::report::{to_value, ReportDoc};
use crate::spec::{GroupSpec, SubsetSpec};
use crate::{Cli, Command, CoverArgs, Format, MixArgs, ProductFreeArgs, SpectralMethod, WordCommand, WordMode};

struct Ctx {
    seed: u64,
    limits: Limits,
}

impl Ctx {
    fn group(&self, spec: &GroupSpec) -> Result<FiniteGroup> {
        spec.0.construct(&self.limits)
    }

    fn k(&self, group: &FiniteGroup) -> Result<u64> {
        character_table(group, &self.limits)?.min_nontrivial_degree()
    }
}

fn words(texts: &[String]) -> Result<Vec<Word>> {
    texts
        .iter()
        .map(|t| {
            let w = parse_word(t)?;
            w.require_nontrivial()?;
            Ok(w)
        })
        .collect()
}

pub fn dispatch(cli: &Cli) -> Result<String> {
    let ctx = Ctx {
        seed: cli.seed,
        limits: cli.limits(),
    };
    if cli.format == Format::Tsv {
        return match &cli.command {
            Command::Chartab { group } => Ok(character_table(&ctx.group(group)?, &ctx.limits)?.to_tsv()),
            _ => Err(Error::Invalid("TSV output is only available for chartab".into())),
        };
    }
    let (name, inputs, results) = match &cli.command {
        Command::Describe { group } => ("describe", json!({ "group": group.to_string() }), describe(&ctx, group)?),
        Command::Chartab { group } => ("chartab", json!({ "group": group.to_string() }), chartab(&ctx, group)?),
        Command::K { group } => {
            let table = character_table(&ctx.group(group)?, &ctx.limits)?;
            let results = json!({ "k": table.min_nontrivial_degree()?, "degrees": table.degrees() });
            ("k", json!({ "group": group.to_string() }), results)
        }
        Command::Mix(args) => ("mix", mix_inputs(args), mix(&ctx, args)?),
        Command::Cover(args) => (
            "cover",
            json!({ "group": args.group.to_string(), "subset": args.subset.to_string(), "trials": args.trials }),
            cover(&ctx, args)?,
        ),
        Command::Productfree(args) => (
            "productfree",
            json!({ "group": args.group.to_string(), "restarts": args.restarts, "exact": args.exact }),
            productfree(&ctx, args)?,
        ),
        Command::Profile { group, trials } => {
            let cfg = ProfileConfig {
                trials: *trials,
                seed: ctx.seed,
                ..ProfileConfig::default()
            };
            let p = quasirandomness_profile(&ctx.group(group)?, &cfg, &ctx.limits)?;
            ("profile", json!({ "group": group.to_string(), "trials": trials }), to_value(&p)?)
        }
        Command::Minindex { group } => ("minindex", json!({ "group": group.to_string() }), minindex(&ctx, group)?),
        Command::Growth { group, subset } => {
            let g = ctx.group(group)?;
            let r = cover_exponent(&g, &subset.resolve(&g)?)?;
            (
                "growth",
                json!({ "group": group.to_string(), "subset": subset.to_string() }),
                to_value(&r)?,
            )
        }
        Command::Word(cmd) => word(&ctx, cmd)?,
        Command::Fpf { group } => {
            let r = fpf_triple_check(&ctx.group(group)?, &ctx.limits)?;
            ("fpf", json!({ "group": group.to_string() }), to_value(&r)?)
        }
    };
    Ok(ReportDoc::new(name, inputs, results, ctx.seed, ctx.limits).to_json())
}

fn describe(ctx: &Ctx, spec: &GroupSpec) -> Result<Value> {
    let g = ctx.group(spec)?;
    let classes = conjugacy_classes(&g, &ctx.limits)?;
    Ok(json!({
        "order": g.order(),
        "backend": g.backend().name(),
        "generators": g.generators(),
        "classes": classes.count(),
        "class_sizes": classes.sizes(),
        "class_element_orders": classes.element_orders(),
        "abelian": g.is_abelian(),
        "perfect": g.is_perfect(),
        "lie": g.lie(),
    }))
}

fn chartab(ctx: &Ctx, spec: &GroupSpec) -> Result<Value> {
    let table = character_table(&ctx.group(spec)?, &ctx.limits)?;
    let values: Vec<Vec<[f64; 2]>> = table
        .values()
        .iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    Ok(json!({
        "classes": table.classes(),
        "degrees": table.degrees(),
        "k": table.min_nontrivial_degree().ok(),
        "prime": table.prime(),
        "values": values,
        "row_orthogonality_residual": table.row_orthogonality_residual(),
        "column_orthogonality_residual": table.column_orthogonality_residual(),
    }))
}

fn mix_inputs(args: &MixArgs) -> Value {
    json!({
        "group": args.group.to_string(),
        "subset": args.subset.to_string(),
        "method": format!("{:?}", args.method).to_lowercase(),
        "triple": args.triple.as_ref().map(|t| t.iter().map(ToString::to_string).collect::<Vec<_>>()),
        "trials": args.trials,
    })
}

fn mix(ctx: &Ctx, args: &MixArgs) -> Result<Value> {
    let g = ctx.group(&args.group)?;
    let k = ctx.k(&g)?;
    let cfg = SpectralConfig {
        method: match args.method {
            SpectralMethod::Auto => Method::Auto,
            SpectralMethod::Dense => Method::Dense,
            SpectralMethod::Lanczos => Method::Lanczos,
        },
        seed: ctx.seed,
        ..SpectralConfig::default()
    };
    let mut runs = Vec::new();
    let mut all_hold = true;
    for t in 0..args.trials.max(1) {
        let spec = trial_spec(&args.subset, args.trials, t);
        let b = spec.resolve(&g)?;
        let mut check = verify_mixing_bound(&g, &b, k, &cfg, &ctx.limits)?;
        let r = &check.report;
        if !check.holds || !r.xe_exact || !r.trace_identity_holds() || !r.row_sums_ok {
            return Err(Error::TheoremViolation(format!(
                "spectral identities fail for {spec}: max|λ|² = {}, n|B|/k = {}, Xe exact: {}, tr(X²) = {} (expected {})",
                r.max_abs_on_ideal * r.max_abs_on_ideal,
                (r.n * r.subset_size) as f64 / k as f64,
                r.xe_exact,
                r.trace_x2,
                r.trace_expected
            )));
        }
        all_hold &= check.holds;
        if !args.spectrum {
            check.report.ideal_spectrum = None;
        }
        let witness = match &args.triple {
            Some(specs) => {
                let a = trial_spec(&specs[0], args.trials, t).resolve(&g)?;
                let c = trial_spec(&specs[1], args.trials, t).resolve(&g)?;
                Some(to_value(&mixing_triple_witness(&g, &a, &b, &c, k, Some((&cfg, &ctx.limits)))?)?)
            }
            None => None,
        };
        runs.push(json!({
            "subset": spec.to_string(),
            "holds": check.holds,
            "margin": check.margin,
            "spectral": to_value(&check.report)?,
            "witness": witness,
        }));
    }
    Ok(json!({ "k": k, "all_hold": all_hold, "runs": runs }))
}

/// The spec itself for a single run, a child-seeded copy per trial otherwise.
fn trial_spec(spec: &SubsetSpec, trials: u64, t: u64) -> SubsetSpec {
    if trials <= 1 {
        spec.clone()
    } else {
        spec.for_trial(t)
    }
}

fn cover(ctx: &Ctx, args: &CoverArgs) -> Result<Value> {
    if args.trials > 1 && !args.subset.is_random() {
        return Err(Error::Invalid("--trials needs a random subset spec".into()));
    }
    let g = ctx.group(&args.group)?;
    let k = ctx.k(&g)?;
    let is_psl = g.lie().is_some_and(|l| l.kind == MatrixKind::PSL);
    let mut runs = Vec::new();
    let mut all_cover = true;
    for t in 0..args.trials.max(1) {
        let spec = trial_spec(&args.subset, args.trials, t);
        let b = spec.resolve(&g)?;
        let report = triple_product_covers(&g, &b, k)?;
        let psl = if is_psl { Some(psl_covering_check(&g, &b)?) } else { None };
        all_cover &= report.covers;
        runs.push(json!({
            "subset": spec.to_string(),
            "report": to_value(&report)?,
            "psl": psl.map(|p| to_value(&p)).transpose()?,
        }));
    }
    let threshold = gowers_threshold(g.order(), k);
    Ok(json!({
        "k": k,
        "threshold": threshold,
        "least_size_above_threshold": least_integer_above(threshold),
        "covers": all_cover,
        "runs": runs,
    }))
}

fn productfree(ctx: &Ctx, args: &ProductFreeArgs) -> Result<Value> {
    let g = ctx.group(&args.group)?;
    if args.exact && g.order() > ALPHA_EXACT_MAX {
        return Err(Error::CapExceeded {
            what: "exact product-free order",
            value: g.order() as u128,
            cap: ALPHA_EXACT_MAX as u128,
        });
    }
    let k = ctx.k(&g)?;
    let budget = SearchBudget {
        restarts: args.restarts,
        seed: ctx.seed,
    };
    let search = product_free_search(&g, &budget, &ctx.limits)?;
    let recheck = is_product_free(&g, &quasirandom::SubsetMask::from_indices(g.order(), search.best.elements.iter().copied())?)?;
    let bound = gowers_threshold(g.order(), k);
    if !recheck.is_product_free() {
        return Err(Error::TheoremViolation(format!("search returned a set that is not product-free: {:?}", recheck.status)));
    }
    if search.best.size as f64 > bound {
        return Err(Error::TheoremViolation(format!(
            "product-free set of size {} exceeds n/k^(1/3) = {bound}",
            search.best.size
        )));
    }
    let alpha = if args.exact { Some(to_value(&alpha_exact(&g)?)?) } else { None };
    Ok(json!({
        "k": k,
        "gowers_bound": bound,
        "search": to_value(&search)?,
        "alpha": alpha,
    }))
}

fn minindex(ctx: &Ctx, spec: &GroupSpec) -> Result<Value> {
    let g = ctx.group(spec)?;
    let k = ctx.k(&g)?;
    let r = min_proper_subgroup_index(&g, &ctx.limits)?;
    let bound = C0 * (k * k) as f64;
    if r.index as f64 > bound {
        return Err(Error::TheoremViolation(format!("least proper index {} exceeds C0*k^2 = {bound}", r.index)));
    }
    Ok(json!({ "k": k, "c0": C0, "bound": bound, "within_bound": true, "report": to_value(&r)? }))
}

fn word(ctx: &Ctx, cmd: &WordCommand) -> Result<(&'static str, Value, Value)> {
    match cmd {
        WordCommand::Values { set, mode, samples } => {
            let g = ctx.group(&set.group)?;
            let ws = words(&set.words)?;
            let mode_value = match mode {
                WordMode::Exact => ValueMode::Exact,
                WordMode::Sampled => ValueMode::Sampled {
                    samples: *samples,
                    seed: ctx.seed,
                },
                WordMode::Auto => ValueMode::Auto {
                    samples: *samples,
                    seed: ctx.seed,
                },
            };
            let r = word_value_set(&g, &ws, mode_value, &ctx.limits)?;
            let inputs = json!({ "group": set.group.to_string(), "words": set.words, "mode": to_value(&mode_value)? });
            Ok(("word values", inputs, to_value(&r)?))
        }
        WordCommand::Waring {
            set,
            sparse_trials,
            distinct,
            noncommuting,
        } => {
            let g = ctx.group(&set.group)?;
            let cfg = WaringConfig {
                sparse_trials: *sparse_trials,
                seed: ctx.seed,
                distinct_factors: *distinct,
                noncommuting: *noncommuting,
            };
            let r = waring_check(&g, &words(&set.words)?, &cfg, &ctx.limits)?;
            let inputs = json!({ "group": set.group.to_string(), "words": set.words, "config": to_value(&cfg)? });
            Ok(("word waring", inputs, to_value(&r)?))
        }
        WordCommand::Rs { group, samples } => {
            let Family::Linear { kind, dim, q } = &group.0 else {
                return Err(Error::WrongBackend { expected: "matrix" });
            };
            let mg = MatrixGroup::new(*kind, *dim, *q)?;
            let mode = match samples {
                Some(s) => RsMode::Sampled { samples: *s },
                None => RsMode::Exact,
            };
            let r = rs_fraction(&mg, mode, ctx.seed, &ctx.limits)?;
            Ok(("word rs", json!({ "group": group.to_string(), "mode": to_value(&mode)? }), to_value(&r)?))
        }
        WordCommand::Genprob { set, trials } => {
            let g = ctx.group(&set.group)?;
            let r = random_pair_generates(&g, &words(&set.words)?, *trials, ctx.seed, &ctx.limits)?;
            let inputs = json!({ "group": set.group.to_string(), "words": set.words, "trials": trials });
            Ok(("word genprob", inputs, to_value(&r)?))
        }
    }
}
