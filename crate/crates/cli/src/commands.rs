//! One function per subcommand, each returning a report and a summary.

use std::fs;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use bimod::bimodule::checks::{bimodule_check, descent_check, phi_check, stability_check, swap_check};
use bimod::bimodule::exact::{shift_grid_weight, shift_identity_grid};
use bimod::bimodule::products::star_top_weight;
use bimod::bimodule::{quotient_dim, star_general, Headroom, OSpaceSpec, ProductParams, SampleShape, SpanCache};
use bimod::expr::parse_element;
use bimod::formal::{identity_grid, IdentityBounds};
use bimod::linalg::Elimination;
use bimod::rep::{
    annihilation_check, level_product_grid, omega_subspace, structure_check, InputModule, TestModule, UniversalMap,
    VermaConfig, VermaModule,
};
use bimod::report::{GridReport, RunReport};
use bimod::voa::{CharacterTable, Voa, VoaKind};
use bimod::{Rational, RationalVoa, Vector};

use crate::{Cli, Command, MembershipSuite, Outcome, RepSuite, VerifySuite};

/// Builds the selected algebra through weight `needed`, or through the
/// user's `--max-weight`, which must then be at least `needed`.
fn build_voa(cli: &Cli, needed: usize) -> Result<Arc<RationalVoa>> {
    let kind = VoaKind::<Rational>::parse(&cli.voa)?;
    let floor = if matches!(kind, VoaKind::Ising) { 6 } else { 0 };
    let max = match cli.max_weight {
        Some(w) if w < needed => return Err(bimod::Error::WeightRange { needed, max: w }.into()),
        Some(w) => w,
        None => needed.max(floor),
    };
    Ok(Arc::new(Voa::new(kind, max)?))
}

fn report(cli: &Cli, params: Value) -> RunReport {
    RunReport::new(cli.command.name(), params)
}

fn grid_line(r: &GridReport) -> String {
    let module = r.module.as_deref().map(|m| format!(" on {m}")).unwrap_or_default();
    format!("{}{}: {}/{} passed", r.check, module, r.passed, r.cases)
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Verify {
            suite,
            unit_sum,
            cancellation,
            reciprocal_l,
            reciprocal_k,
            convolution,
            grid_weight,
            max_level,
        } => match suite {
            VerifySuite::Binomial => {
                let bounds = IdentityBounds {
                    unit_sum: *unit_sum,
                    cancellation: *cancellation,
                    reciprocal_l: *reciprocal_l,
                    reciprocal_k: *reciprocal_k,
                    convolution: *convolution,
                };
                let grid = identity_grid::<Rational>(bounds)?;
                let mut rep = report(cli, json!({"suite": "binomial", "bounds": bounds}));
                rep.passed = grid.all_passed();
                let summary =
                    grid.families.iter().map(|f| format!("{}: {}/{} passed", f.family, f.passed, f.cases)).collect();
                rep.result = serde_json::to_value(&grid)?;
                Ok(Outcome { report: rep, summary })
            }
            VerifySuite::Shift => {
                let voa = build_voa(cli, shift_grid_weight(*grid_weight, *max_level))?;
                let (left, level) = shift_identity_grid(&voa, *grid_weight, *max_level)?;
                let mut rep = report(
                    cli,
                    json!({"suite": "shift", "grid_weight": grid_weight, "max_level": max_level, "max_weight": voa.max_weight()}),
                );
                rep.algebra = Some(voa.id());
                rep.passed = left.all_passed() && level.all_passed();
                let summary = vec![grid_line(&left), grid_line(&level)];
                rep.result = json!({"grids": [left, level]});
                Ok(Outcome { report: rep, summary })
            }
        },
        Command::Product { u, v, m, p, n } => {
            let (eu, ev) = (parse_element(u)?, parse_element(v)?);
            let params = ProductParams::new(*m, *p, *n);
            let voa = build_voa(cli, star_top_weight(eu.weight(), ev.weight(), params) + 1)?;
            let (xu, xv) = (eu.evaluate(&voa)?, ev.evaluate(&voa)?);
            let out = star_general(&voa, &xu, &xv, params)?;
            let text = voa.format(&out);
            let mut rep = report(cli, json!({"u": u, "v": v, "m": m, "p": p, "n": n, "max_weight": voa.max_weight()}));
            rep.algebra = Some(voa.id());
            rep.result = json!({"product": text, "top_weight": out.top_weight()});
            Ok(Outcome { report: rep, summary: vec![text] })
        }
        Command::Ospan { kind, n, m, cutoff, aux_bound } => {
            let voa = build_voa(cli, cutoff + 1)?;
            let mut spec = OSpaceSpec::new(*kind, *n, *m, *cutoff);
            if let Some(a) = aux_bound {
                spec = spec.with_aux_bound(*a);
            }
            let cache = SpanCache::new(Elimination::Screened);
            let span = cache.get(&voa, spec)?;
            let mut rep = report(cli, json!({"spec": spec, "max_weight": voa.max_weight()}));
            rep.algebra = Some(voa.id());
            rep.result = json!({
                "ambient_dim": span.ambient_dim(),
                "rank": span.rank(),
                "quotient_dim": span.quotient_dim(),
                "generators": span.generators,
            });
            rep.timings.insert("span".into(), span.build_seconds);
            let summary = vec![format!(
                "{} ({n},{m}) at W={cutoff}, P={}: rank {} of {} from {} generators",
                kind.name(),
                spec.aux_bound,
                span.rank(),
                span.ambient_dim(),
                span.generators
            )];
            Ok(Outcome { report: rep, summary })
        }
        Command::QuotientDim { kind, n, m, cutoff, aux_bound } => {
            let voa = build_voa(cli, cutoff + 1)?;
            let cache = SpanCache::new(Elimination::Screened);
            let q = quotient_dim(&voa, &cache, *kind, *n, *m, *cutoff, *aux_bound)?;
            let mut rep =
                report(cli, json!({"kind": kind, "n": n, "m": m, "cutoff": cutoff, "aux_bound": q.aux_bound}));
            rep.algebra = Some(voa.id());
            let summary = vec![format!(
                "dim F_{cutoff}/{} ({n},{m}) = {} (at W-1: {}){}",
                kind.name(),
                q.dim,
                q.previous_dim.map_or("-".into(), |d| d.to_string()),
                if q.stabilized { "" } else { ", not yet stable" }
            )];
            rep.result = serde_json::to_value(&q)?;
            Ok(Outcome { report: rep, summary })
        }
        Command::Check { suite, trials, headroom_base, headroom_cap, sample_weight, sample_level, exact } => {
            let voa = build_voa(cli, headroom_cap + 1)?;
            let cache = SpanCache::new(if *exact { Elimination::Exact } else { Elimination::Screened });
            let headroom = Headroom::new(*headroom_base, *headroom_cap);
            let shape = SampleShape { max_weight: *sample_weight, max_level: *sample_level };
            let run = match suite {
                MembershipSuite::Swap => swap_check,
                MembershipSuite::Stability => stability_check,
                MembershipSuite::Bimodule => bimodule_check,
                MembershipSuite::Phi => phi_check,
                MembershipSuite::Descent => descent_check,
            };
            let r = run(&voa, &cache, headroom, shape, cli.seed, *trials)?;
            let mut rep = report(cli, json!({"headroom": headroom, "shape": shape, "trials": trials, "exact": exact}));
            rep.seed = Some(cli.seed);
            rep.algebra = Some(voa.id());
            rep.passed = r.all_passed();
            let mut summary: Vec<String> =
                r.by_check.iter().map(|(k, c)| format!("{k}: {}/{} in the span", c.passed, c.cases)).collect();
            summary.push(format!("{} redrawn over the headroom cap", r.redrawn));
            summary
                .extend(r.failures.iter().take(5).map(|f| format!("failure {}: {}\n  {}", f.check, f.inputs, f.repro)));
            rep.result = serde_json::to_value(&r)?;
            Ok(Outcome { report: rep, summary })
        }
        Command::RepCheck {
            module,
            suite,
            levels,
            grid_weight,
            max_level,
            n,
            m,
            probe_weight,
            cutoff,
            aux_bound,
            trials,
        } => {
            let needed = match suite {
                RepSuite::LevelProduct => 2 * grid_weight + 2 * *max_level as usize + 1,
                RepSuite::Omega => *probe_weight,
                RepSuite::Annihilation => cutoff + 1,
            };
            let voa = build_voa(cli, needed)?;
            let tm = TestModule::parse(&voa, module, *levels)?;
            let mut rep = report(cli, Value::Null);
            rep.algebra = Some(voa.id());
            let mut summary = Vec::new();
            match suite {
                RepSuite::LevelProduct => {
                    rep.params = json!({"suite": "level-product", "module": module, "levels": levels,
                        "grid_weight": grid_weight, "max_level": max_level});
                    let (prod, fact) = level_product_grid(&voa, &tm, *grid_weight, *max_level)?;
                    rep.passed = prod.all_passed() && fact.all_passed();
                    summary.push(grid_line(&prod));
                    summary.push(grid_line(&fact));
                    rep.result = json!({"grids": [prod, fact]});
                }
                RepSuite::Omega => {
                    rep.params = json!({"suite": "omega", "module": module, "levels": levels, "m": m,
                        "probe_weight": probe_weight});
                    let om = omega_subspace(&voa, &tm, *m as usize, *probe_weight)?;
                    rep.passed = om.is_truncation();
                    summary.push(format!("kernel dims {:?} against module dims {:?}", om.dims, om.module_dims));
                    rep.result = serde_json::to_value(&om)?;
                }
                RepSuite::Annihilation => {
                    rep.params = json!({"suite": "annihilation", "module": module, "levels": levels, "n": n, "m": m,
                        "cutoff": cutoff, "aux_bound": aux_bound, "trials": trials});
                    rep.seed = Some(cli.seed);
                    let r = annihilation_check(&voa, &tm, *n, *m, *cutoff, *aux_bound, cli.seed, *trials)?;
                    rep.passed = r.all_passed();
                    summary.push(grid_line(&r));
                    rep.result = serde_json::to_value(&r)?;
                }
            }
            Ok(Outcome { report: rep, summary })
        }
        Command::Verma { m, levels, cutoff, kind, rep_weight, u_spec, probe_weight, range, target } => {
            let voa = build_voa(cli, cutoff + 1)?;
            let text = fs::read_to_string(u_spec).with_context(|| format!("reading {}", u_spec.display()))?;
            let value: Value = serde_json::from_str(&text).map_err(|e| bimod::Error::Config(format!("u-spec: {e}")))?;
            let input = InputModule::from_json(&voa, &value)?;
            let mut config = VermaConfig::new(*m, *levels, *cutoff, *kind);
            if let Some(w) = rep_weight {
                config = config.with_rep_weight(*w);
            }
            let mut verma = VermaModule::build(voa.clone(), input.clone(), config)?;
            let needed = verma.required_weight(*probe_weight, *range);
            if needed > voa.max_weight() {
                // Mode checks reduce above the build cutoff; grow the algebra once.
                let voa = build_voa(cli, needed)?;
                let input = InputModule::from_json(&voa, &value)?;
                verma = VermaModule::build(voa, input, config)?;
            }
            let voa = verma.voa().clone();
            let probes: Vec<Vector> =
                voa.basis_keys(*probe_weight).into_iter().map(|(w, i)| Vector::basis(w, i)).collect();
            let vacuum = verma.vacuum_check()?;
            let commutator = verma.commutator_check(&probes, *range)?;
            let iterate = verma.iterate_check(&probes, *range)?;
            let mut grids = vec![vacuum, commutator, iterate];
            let mut map = Value::Null;
            if let Some(t) = target {
                let tm = TestModule::parse(&voa, t, *levels)?;
                let images = (0..verma.input().dim).map(|k| tm.basis_vector(*m as usize, k)).collect();
                let um = UniversalMap::new(&verma, &tm, images)?;
                grids.push(um.intertwining_check(&probes, *range)?);
                let kills = (0..=*levels).map(|n| um.kills_relations(n)).collect::<bimod::Result<Vec<bool>>>()?;
                map = json!({"target": t, "kills_relations": kills});
            }
            let mut rep = report(
                cli,
                json!({"config": config, "u_spec": value, "probe_weight": probe_weight,
                "range": range, "target": target}),
            );
            rep.algebra = Some(voa.id());
            rep.passed = grids.iter().all(GridReport::all_passed)
                && map.get("kills_relations").is_none_or(|k| k.as_array().is_some_and(|a| a.iter().all(|b| b == true)));
            let mut summary = vec![format!("level dims {:?}", verma.dims())];
            for l in verma.levels().iter().filter(|l| !l.stabilized) {
                summary.push(format!("level {} changed from W-1 to W: {:?} -> {}", l.n, l.previous_dim, l.dim));
            }
            for l in verma.levels().iter().filter(|l| l.discarded_classes > 0) {
                summary.push(format!(
                    "level {}: {} classes above the representative weight discarded",
                    l.n, l.discarded_classes
                ));
            }
            summary.extend(grids.iter().map(grid_line));
            rep.result = json!({"levels": verma.levels(), "grids": grids, "map": map});
            Ok(Outcome { report: rep, summary })
        }
        Command::Structure { n, m, cutoff, kind, confirm } => {
            let voa = build_voa(cli, cutoff + confirm + 1)?;
            if !matches!(voa.kind(), VoaKind::Ising) {
                bail!(bimod::Error::Config("the structure check needs --voa ising".into()));
            }
            let table = CharacterTable::ising((*n).max(*m) as usize);
            let cache = SpanCache::new(Elimination::Screened);
            let r = structure_check(&voa, &cache, &table, *kind, *n, *m, *cutoff, *confirm)?;
            let mut rep = report(cli, json!({"kind": kind, "n": n, "m": m, "cutoff": cutoff, "confirm": confirm}));
            rep.algebra = Some(voa.id());
            rep.passed = r.passed();
            let mut summary = vec![format!(
                "quotient dim {} (at W-1: {}), Hom-space count {}",
                r.quotient.dim,
                r.quotient.previous_dim.map_or("-".into(), |d| d.to_string()),
                r.expected
            )];
            summary.push(format!("dims from W upward: {:?}", r.confirmation));
            if let Some(d) = r.level_algebra_dim {
                summary.push(format!("level algebra from its own relations: {d}"));
            }
            rep.result = serde_json::to_value(&r)?;
            Ok(Outcome { report: rep, summary })
        }
        Command::Membership { kind, n, m, cutoff, aux_bound, element } => {
            let expr = parse_element(element)?;
            let voa = build_voa(cli, (cutoff + 1).max(expr.weight()))?;
            let x = expr.evaluate(&voa)?;
            let mut spec = OSpaceSpec::new(*kind, *n, *m, *cutoff);
            if let Some(a) = aux_bound {
                spec = spec.with_aux_bound(*a);
            }
            let cache = SpanCache::new(Elimination::Screened);
            let span = cache.get(&voa, spec)?;
            let residual = span.reduce(&x)?;
            let mut rep = report(cli, json!({"spec": spec, "element": element}));
            rep.algebra = Some(voa.id());
            rep.passed = residual.is_zero();
            let text = voa.format(&residual);
            rep.result = json!({"member": rep.passed, "normal_form": text, "rank": span.rank(), "ambient_dim": span.ambient_dim()});
            Ok(Outcome { report: rep, summary: vec![format!("normal form: {text}")] })
        }
    }
}
