use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use nbw_core::curve::{self, CurveFile, CurveMap, SplittingType};
use nbw_core::modifications::{self, ConditionKind, ModSpec};
use nbw_core::planner;
use nbw_core::stability::{self, CurveClass, NodalConfig, SubbundleDatum, Verdict};
use nbw_core::{Error, FieldSpec, Result};
use num_rational::Rational64;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::{Command, SeedSpec};

type Outcome = Result<(Value, Value)>;

pub fn run(cmd: &Command) -> (&'static str, Outcome) {
    match cmd {
        Command::Splitting { curve, random, field, seed, degree_bound } => {
            ("splitting", splitting(curve.as_deref(), random.as_deref(), *field, *seed, *degree_bound))
        }
        Command::Classify { d, g, char } => ("classify", classify(*d, *g, *char)),
        Command::Plan { d, g, char } => ("plan", plan(*d, *g, *char)),
        Command::Modify { curve, modspec } => ("modify", modify(curve, modspec)),
        Command::Nodal { config } => ("nodal", nodal(config)),
        Command::VerifyChar2 { dmin, dmax, trials, seed, r } => {
            ("verify-char2", verify_char2(*dmin, *dmax, *trials, *seed, *r))
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn ratio(x: Rational64) -> Value {
    if *x.denom() == 1 {
        json!(x.numer())
    } else {
        json!(format!("{}/{}", x.numer(), x.denom()))
    }
}

fn splitting_report(c: &CurveMap, bound: Option<usize>) -> Result<Value> {
    let bound = bound.unwrap_or_else(|| curve::default_degree_bound(c.degree()));
    let validation = curve::validate(c);
    if let Some(why) = validation.failure() {
        return Err(Error::InvalidCurve(why));
    }
    let normal = curve::normal_splitting_bounded(c, bound)?;
    let tangent = curve::restricted_tangent_splitting_bounded(c, bound)?;
    Ok(json!({
        "validation": validation,
        "normal_splitting": normal,
        "restricted_tangent_splitting": tangent,
        "balanced": normal.is_balanced(),
        "verdict": modifications::is_semistable(&normal),
    }))
}

fn splitting(
    curve_path: Option<&Path>,
    random: Option<&[usize]>,
    field: FieldSpec,
    seed: SeedSpec,
    bound: Option<usize>,
) -> Outcome {
    if let Some(path) = curve_path {
        let c = CurveFile::parse(&read(path)?)?;
        let inputs = json!({ "curve_file": path.display().to_string(), "curve": CurveFile::from_curve(&c) });
        return Ok((inputs, splitting_report(&c, bound)?));
    }
    let [d, r] = random
        .and_then(|v| <[usize; 2]>::try_from(v).ok())
        .ok_or_else(|| Error::Parse("--random needs D and R".into()))?;
    let seeds = seed.seeds();
    let inputs = json!({
        "random": { "d": d, "r": r },
        "field": nbw_core::field::FieldJson::from(field),
        "seeds": seeds,
    });
    let mut results = Vec::new();
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    for &s in &seeds {
        let rc = curve::random_curve(d, r, field, s)?;
        let report = splitting_report(&rc.curve, bound)?;
        *histogram.entry(report["normal_splitting"].to_string()).or_default() += 1;
        results.push(json!({
            "seed": s,
            "rerolls": rc.rerolls,
            "curve": CurveFile::from_curve(&rc.curve),
            "result": report,
        }));
    }
    let outputs = match seed {
        SeedSpec::One(_) => results.pop().expect("one seed"),
        SeedSpec::Range(..) => json!({ "histogram": histogram, "results": results }),
    };
    Ok((inputs, outputs))
}

fn classify(d: i64, g: i64, char: u64) -> Outcome {
    let c = stability::classify(CurveClass { d, g, char })?;
    let inputs = json!({ "d": d, "g": g, "char": char });
    let outputs = json!({
        "verdict": c.verdict,
        "reason": c.reason,
        "rho": stability::rho(g, 3, d),
        "normal_degree": stability::normal_degree(d, g),
        "mu_normal": ratio(stability::mu_normal(d, g)),
        "quadric_sub_slope": ratio(stability::quadric_sub_slope(d, g)),
    });
    Ok((inputs, outputs))
}

fn plan(d: i64, g: i64, char: u64) -> Outcome {
    let p = planner::plan(CurveClass { d, g, char })?;
    let check = planner::verify_plan(&p);
    if !check.ok {
        return Err(Error::Invariant(format!("planner produced an invalid plan: {:?}", check.diagnostics)));
    }
    let inputs = json!({ "d": d, "g": g, "char": char });
    let outputs = json!({
        "plan": p,
        "verified": check.ok,
        "technique": planner::technique(&p.terminal, char),
    });
    Ok((inputs, outputs))
}

fn modify(curve_path: &Path, modspec_path: &Path) -> Outcome {
    let c = CurveFile::parse(&read(curve_path)?)?;
    let spec = ModSpec::parse(&read(modspec_path)?)?;
    let mb = spec.apply(&c)?;
    let st = modifications::splitting_type(&mb)?;
    let has_jet2 = mb.conditions().iter().any(|c| c.kind == ConditionKind::Jet2);
    let iterated: Option<SplittingType> =
        if has_jet2 { Some(modifications::iterated_pointing_splitting(&mb)?) } else { None };
    let inputs = json!({
        "curve_file": curve_path.display().to_string(),
        "modspec_file": modspec_path.display().to_string(),
        "curve": CurveFile::from_curve(&c),
        "modspec": spec,
    });
    let outputs = json!({
        "rank": mb.rank(),
        "expected_degree": mb.expected_degree(),
        "splitting": st,
        "verdict": modifications::is_semistable(&st),
        "iterated_pointing_splitting": iterated,
        "iterated_agrees": iterated.as_ref().map(|it| it == &st),
    });
    Ok((inputs, outputs))
}

#[derive(Deserialize)]
struct NodalFile {
    #[serde(flatten)]
    config: NodalConfig,
    #[serde(default)]
    subbundles: Vec<SubbundleDatum>,
    #[serde(default)]
    verdicts: Option<BTreeMap<String, Verdict>>,
}

fn nodal(path: &Path) -> Outcome {
    let text = read(path)?;
    let file: NodalFile = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let cfg = file.config;
    cfg.validate()?;
    let adjusted = file
        .subbundles
        .iter()
        .map(|sub| {
            let adj = stability::adjusted_slope(&cfg, sub)?;
            Ok(json!({
                "rank": sub.rank,
                "slope": ratio(sub.slope()),
                "adjusted_slope": ratio(adj),
                "pullback": sub.is_pullback(),
                "destabilizes": adj >= cfg.slope(),
            }))
        })
        .collect::<Result<Vec<Value>>>()?;
    let naive = match &file.verdicts {
        Some(v) => Some(stability::naive_semistable_check(&cfg, v)?),
        None => None,
    };
    let inputs = json!({ "config_file": path.display().to_string(), "config": cfg });
    let outputs = json!({
        "rank": cfg.rank(),
        "degree": cfg.degree(),
        "slope": ratio(cfg.slope()),
        "is_chain": cfg.is_chain(),
        "subbundles": adjusted,
        "naive_check": naive,
    });
    Ok((inputs, outputs))
}

#[derive(Default)]
struct DegreeTally {
    histogram: BTreeMap<String, usize>,
    parity_violations: usize,
    balanced: usize,
    unstable: usize,
    rerolls: usize,
}

fn verify_char2(dmin: usize, dmax: usize, trials: u64, seed: u64, r: usize) -> Outcome {
    if dmin < r.max(1) || dmin > dmax {
        return Err(Error::Precondition(format!("need {r} <= dmin <= dmax")));
    }
    let f2 = FieldSpec::prime(2)?;
    let jobs: Vec<(usize, u64)> = (dmin..=dmax).flat_map(|d| (0..trials).map(move |i| (d, seed + i))).collect();
    let runs: Vec<(usize, SplittingType, usize)> = jobs
        .par_iter()
        .map(|&(d, s)| {
            let rc = curve::random_curve(d, r, f2, s)?;
            Ok((d, curve::normal_splitting(&rc.curve)?, rc.rerolls))
        })
        .collect::<Result<_>>()?;
    let mut tallies: BTreeMap<usize, DegreeTally> = BTreeMap::new();
    for (d, st, rerolls) in runs {
        let t = tallies.entry(d).or_default();
        *t.histogram.entry(st.to_string()).or_default() += 1;
        if st.parts().iter().any(|a| (a - d as i64).rem_euclid(2) != 0) {
            t.parity_violations += 1;
        }
        if st.is_balanced() {
            t.balanced += 1;
        }
        if modifications::is_semistable(&st) == Verdict::Unstable {
            t.unstable += 1;
        }
        t.rerolls += rerolls;
    }
    let violations: usize = tallies.values().map(|t| t.parity_violations).sum();
    let per_degree: Vec<Value> = tallies
        .iter()
        .map(|(d, t)| {
            json!({
                "d": d,
                "trials": trials,
                "parity_violations": t.parity_violations,
                "balanced": t.balanced,
                "unstable": t.unstable,
                "semistability_possible": stability::char2_semistability_necessary(*d as i64, r as i64, 2).ok(),
                "rerolls": t.rerolls,
                "histogram": t.histogram,
            })
        })
        .collect();
    let inputs = json!({ "dmin": dmin, "dmax": dmax, "trials": trials, "seed": seed, "r": r, "field": "F_2" });
    let outputs = json!({ "violations": violations, "per_degree": per_degree });
    Ok((inputs, outputs))
}
