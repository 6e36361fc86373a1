use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Duration;

use lonely_spectrum::lattice::{
    d_subtorus2, kronecker_lift, named_constants, PiEnclosure,
};
use lonely_spectrum::loneliness::max_loneliness;
use lonely_spectrum::spectrum::{
    accumulation_report, build_spectrum_with, certify_absence_with, count_proper_primitive,
    enumerate_proper_primitive, multiplicity_report, verify_closed_form_s2, verify_family_fan_sun,
    verify_window, BuildOptions, CertifyOptions, EnumerationSpec, SpectrumTable, WindowMode,
};
use lonely_spectrum::subgroups::{d_subgroup, FiniteCyclicSubgroup, FinitePart, ProductSubgroup};
use lonely_spectrum::{d_min_max, d_subtorus1, Error, IntVector, Rational, Result, SpeedTuple, TorusPoint};
use num_bigint::BigInt;
use serde_json::json;

use crate::args::{
    Cli, Command, ConstantsArgs, DistKind, EnumerateArgs, LiftArgs, ModeArg, ReportCmd, SpectrumArgs,
    TableSource, VerifyCmd,
};
use crate::output::{exact, join, verdict, Output};
use crate::repro;

pub fn dispatch(cli: &Cli) -> Result<Output> {
    let threads = resolve_threads(cli.threads)?;
    match &cli.command {
        Command::Ml(a) => ml(&a.speeds),
        Command::Dist { kind } => dist(kind),
        Command::Lift(a) => lift(a),
        Command::Constants(a) => constants(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Spectrum(a) => spectrum(a, threads),
        Command::Verify { check } => verify(check, threads),
        Command::Report { kind } => report(kind, threads),
        Command::Repro(a) => repro::run(&a.out, threads),
    }
}

fn resolve_threads(flag: Option<usize>) -> Result<Option<usize>> {
    if flag == Some(0) {
        return Err(Error::InvalidArgument("--threads must be at least 1".into()));
    }
    BuildOptions {
        threads: flag,
        ..Default::default()
    }
    .resolved_threads()
}

fn speed_tuple(speeds: &[BigInt]) -> Result<SpeedTuple> {
    SpeedTuple::new(IntVector::new(speeds.to_vec()))
}

fn ml(speeds: &[BigInt]) -> Result<Output> {
    let v = speed_tuple(speeds)?;
    let r = max_loneliness(&v);
    let mut out = Output::new(&json!({
        "speeds": v.speeds(),
        "ml": r.ml,
        "witness_time": r.witness_time,
        "d_value": r.d_value,
    }));
    out.field("speeds", v.to_string());
    out.field("ml", exact(&r.ml));
    out.field("witness_time", exact(&r.witness_time));
    out.field("d_value", exact(&r.d_value));
    Ok(out)
}

fn dist(kind: &DistKind) -> Result<Output> {
    match kind {
        DistKind::Cyclic { generator } => {
            let g = FiniteCyclicSubgroup::new(TorusPoint::new(generator.clone()));
            let d = d_subgroup(&ProductSubgroup::finite(FinitePart::Cyclic(g.clone())))?;
            let mut out = Output::new(&json!({
                "generator": g.generator(),
                "order": g.order().to_string(),
                "d_value": d,
            }));
            out.field("generator", g.generator().to_string());
            out.field("order", g.order().to_string());
            out.field("d_value", exact(&d));
            Ok(out)
        }
        DistKind::Line { speeds, shift } => {
            let v = speed_tuple(speeds)?;
            let (d, shift) = match shift {
                Some(h) => {
                    let h = TorusPoint::new(h.clone());
                    (d_min_max(&v, &h)?, Some(h))
                }
                None => (d_subtorus1(&v), None),
            };
            let mut out = Output::new(&json!({
                "speeds": v.speeds(),
                "shift": shift,
                "d_value": d,
            }));
            out.field("speeds", v.to_string());
            if let Some(h) = &shift {
                out.field("shift", h.to_string());
            }
            out.field("d_value", exact(&d));
            Ok(out)
        }
        DistKind::Plane { u, v } => {
            let (u, v) = (IntVector::new(u.clone()), IntVector::new(v.clone()));
            let d = d_subtorus2(&u, &v)?;
            let mut out = Output::new(&json!({ "u": u, "v": v, "d_value": d }));
            out.field("u", u.to_string());
            out.field("v", v.to_string());
            out.field("d_value", exact(&d));
            Ok(out)
        }
    }
}

fn lift(a: &LiftArgs) -> Result<Output> {
    let v = IntVector::new(a.v.clone());
    let cert = kronecker_lift(&v, &a.eps)?;
    let mut out = Output::new(&cert);
    out.field("inner_direction", cert.inner_direction.to_string());
    out.field("outer_plane.u", cert.outer_plane.basis_u.to_string());
    out.field("outer_plane.v", cert.outer_plane.basis_v.to_string());
    out.field("delta_sq", exact(&cert.delta_sq));
    out.field("epsilon", exact(&cert.epsilon));
    out.field("guaranteed", cert.guaranteed.to_string());
    Ok(out)
}

fn constants(a: &ConstantsArgs) -> Result<Output> {
    if a.n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let eps = match &a.eps {
        Some(e) => e.clone(),
        None => Rational::new(2, a.n as i64 * (a.n as i64 + 1)),
    };
    let c = named_constants(a.n, a.k, &a.volume, &eps)?;
    let mut out = Output::new(&c);
    out.field("n", c.n.to_string());
    out.field("k", c.k.to_string());
    out.field("volume", exact(&c.volume));
    out.field("epsilon", exact(&c.epsilon));
    out.field("pi", format!("in ({}, {})", c.pi.lower, c.pi.upper));
    for (name, v) in [
        ("omega_k", &c.omega_k),
        ("ell_kv", &c.ell_kv),
        ("c_star", &c.c_star),
        ("lrc_threshold", &c.lrc_threshold),
        ("tao_bound", &c.tao_bound),
    ] {
        out.field(name, format!("{} (≈ {})", v.symbolic, v.decimal));
    }
    out.field("threshold_below_tao", c.threshold_below_tao.to_string());
    Ok(out)
}

fn enumerate(a: &EnumerateArgs) -> Result<Output> {
    let mut spec = EnumerationSpec::new(a.n, a.max_vol2)?;
    spec.canonical_only = !a.all_orderings;
    if a.count && spec.canonical_only {
        let count = count_proper_primitive(&spec);
        let mut out = Output::new(&json!({ "n": a.n, "max_volume_sq": a.max_vol2, "count": count }));
        out.field("count", count.to_string());
        return Ok(out);
    }
    let tuples: Vec<IntVector> = enumerate_proper_primitive(&spec).map(|t| t.speeds().clone()).collect();
    let mut out = Output::new(&json!({
        "n": a.n,
        "max_volume_sq": a.max_vol2,
        "count": tuples.len(),
        "tuples": tuples,
    }));
    if a.count {
        out.field("count", tuples.len().to_string());
    } else {
        for t in &tuples {
            out.line(join(t.coords(), " "));
        }
    }
    Ok(out)
}

pub(crate) fn build(n: usize, max_vol2: u64, threads: Option<usize>) -> Result<SpectrumTable> {
    build_spectrum_with(
        &EnumerationSpec::new(n, max_vol2)?,
        &BuildOptions {
            threads,
            ..Default::default()
        },
    )
}

fn with_progress<T>(enabled: bool, f: impl FnOnce(Option<Arc<AtomicU64>>) -> T) -> T {
    if !enabled {
        return f(None);
    }
    let counter = Arc::new(AtomicU64::new(0));
    let stop = Arc::new(AtomicBool::new(false));
    let watcher = {
        let (counter, stop) = (counter.clone(), stop.clone());
        std::thread::spawn(move || {
            while !stop.load(Ordering::Relaxed) {
                std::thread::sleep(Duration::from_millis(500));
                eprintln!("progress: {} tuples", counter.load(Ordering::Relaxed));
            }
        })
    };
    let r = f(Some(counter.clone()));
    stop.store(true, Ordering::Relaxed);
    let _ = watcher.join();
    eprintln!("progress: {} tuples (done)", counter.load(Ordering::Relaxed));
    r
}

fn spectrum(a: &SpectrumArgs, threads: Option<usize>) -> Result<Output> {
    let mut spec = EnumerationSpec::new(a.n, a.max_vol2)?;
    spec.canonical_only = !a.all_orderings;
    let table = with_progress(a.progress, |progress| {
        build_spectrum_with(
            &spec,
            &BuildOptions {
                threads,
                checkpoint: a.checkpoint.clone(),
                progress,
            },
        )
    })?;
    let flat = a.flat.clone().unwrap_or_else(|| a.out.with_extension("csv"));
    table.write_json(&a.out)?;
    table.write_flat_file(&flat)?;
    let mut out = Output::new(&json!({
        "n": table.n,
        "max_volume_sq": table.max_volume_sq,
        "keys": table.entries.len(),
        "total_multiplicity": table.total_multiplicity(),
        "max_key": table.max_key(),
        "table": a.out,
        "flat": flat,
    }));
    summarize(&mut out, &table);
    out.field("table", a.out.display().to_string());
    out.field("flat", flat.display().to_string());
    Ok(out)
}

fn summarize(out: &mut Output, table: &SpectrumTable) {
    out.field("n", table.n.to_string());
    out.field("max_volume_sq", table.max_volume_sq.to_string());
    out.field("keys", table.entries.len().to_string());
    out.field("total_multiplicity", table.total_multiplicity().to_string());
    if let Some(k) = table.max_key() {
        out.field("max_key", exact(k));
    }
}

fn load(src: &TableSource, default_n: usize, default_max: u64, threads: Option<usize>) -> Result<SpectrumTable> {
    match &src.table {
        Some(p) => SpectrumTable::read_json(p),
        None => build(src.n.unwrap_or(default_n), src.max_vol2.unwrap_or(default_max), threads),
    }
}

fn load_s2(table: &Option<PathBuf>, max_vol2: u64, threads: Option<usize>) -> Result<SpectrumTable> {
    match table {
        Some(p) => SpectrumTable::read_json(Path::new(p)),
        None => build(2, max_vol2, threads),
    }
}

fn verify(check: &VerifyCmd, threads: Option<usize>) -> Result<Output> {
    match check {
        VerifyCmd::S2 { table, max_vol2 } => {
            let t = load_s2(table, *max_vol2, threads)?;
            let r = verify_closed_form_s2(&t)?;
            let mut out = Output::new(&r);
            out.field("keys_checked", r.keys_checked.to_string());
            if let Some(k) = &r.max_key {
                out.field("max_key", exact(k));
            }
            out.field("violations", format!("[{}]", join(&r.violations, ", ")));
            out.field("missing_s", format!("[{}]", join(&r.missing, ", ")));
            out.line(format!("s2 closed form: {}", verdict(r.pass)));
            Ok(out.check(r.pass))
        }
        VerifyCmd::FanSun { r_max } => {
            let r = verify_family_fan_sun(*r_max);
            let mut out = Output::new(&r);
            out.field("checked", format!("r = 0..={}", r.r_max));
            for f in &r.failures {
                out.line(format!(
                    "r = {}: ML({}) = {}, expected {}",
                    f.r,
                    join(&f.speeds, ", "),
                    f.got,
                    f.expected
                ));
            }
            out.line(format!("fan-sun family: {}", verdict(r.pass)));
            Ok(out.check(r.pass))
        }
        VerifyCmd::Window {
            mode,
            source,
            report_only,
        } => {
            let t = load(source, 3, 40_000, threads)?;
            let mode = match mode {
                ModeArg::Strict => WindowMode::Strict,
                ModeArg::Amended => WindowMode::Amended,
            };
            let r = verify_window(&t, mode)?;
            let mut out = Output::new(&r);
            out.field("n", r.n.to_string());
            out.field("max_volume_sq", t.max_volume_sq.to_string());
            out.field("in_window", r.in_window.to_string());
            for m in &r.matches {
                out.line(format!("  ML = {} = s/(ns + k) with s = {}, k = {}", m.ml, m.s, m.k));
            }
            out.field("violations", format!("[{}]", join(&r.violations, ", ")));
            out.line(format!("window: {}", verdict(r.pass)));
            Ok(out.check(r.pass || *report_only))
        }
        VerifyCmd::Prop81 {
            target,
            n,
            cutoff_vol2,
            pi_lower,
            pi_upper,
        } => {
            let pi = match (pi_lower, pi_upper) {
                (Some(lower), Some(upper)) if lower < upper => Some(PiEnclosure {
                    lower: lower.clone(),
                    upper: upper.clone(),
                }),
                (Some(_), Some(_)) => {
                    return Err(Error::InvalidArgument("pi enclosure needs lower < upper".into()))
                }
                _ => None,
            };
            let c = certify_absence_with(target, *n, *cutoff_vol2, None, &CertifyOptions { threads, pi })?;
            let mut out = Output::new(&c);
            let (a, b) = (&c.exhaustive, &c.symbolic);
            out.field("target", exact(&c.target));
            out.field("n", c.n.to_string());
            out.field("cutoff_volume_sq", c.cutoff_volume_sq.to_string());
            out.field("phase_a.tuples_checked", a.tuples_checked.to_string());
            out.field("phase_a.hits", a.hits.to_string());
            for w in &a.witnesses {
                out.line(format!("  witness ({})", join(w, ", ")));
            }
            out.line(format!("phase A: {}", verdict(a.pass)));
            out.field("phase_b.pi", format!("in ({}, {})", b.pi.lower, b.pi.upper));
            out.field("phase_b.top_values", format!("[{}]", join(&b.facts.top_values, ", ")));
            out.field("phase_b.rest_bound", exact(&b.facts.rest_bound));
            for (k, v) in [("below", &b.below), ("gap", &b.gap), ("epsilon", &b.epsilon)] {
                if let Some(v) = v {
                    out.field(&format!("phase_b.{}", k), exact(v));
                }
            }
            if let Some(v) = &b.density_volume {
                out.field("phase_b.density_volume", v);
            }
            out.field("phase_b.density_holds", b.density_holds.to_string());
            out.field("phase_b.upper_case_holds", b.upper_case_holds.to_string());
            out.field("phase_b.lower_case_holds", b.lower_case_holds.to_string());
            out.line(format!("phase B: {}", verdict(b.pass)));
            out.line(format!("certificate: {}", verdict(c.pass)));
            Ok(out.check(c.pass))
        }
    }
}

fn default_targets() -> Vec<Rational> {
    vec![Rational::new(1, 6), Rational::new(1, 10), Rational::new(1, 14)]
}

fn report(kind: &ReportCmd, threads: Option<usize>) -> Result<Output> {
    match kind {
        ReportCmd::Acc {
            source,
            targets,
            window,
        } => {
            if !window.is_positive() {
                return Err(Error::InvalidArgument(format!("window must be positive, got {}", window)));
            }
            let t = load(source, 3, 10_000, threads)?;
            let targets = targets.clone().unwrap_or_else(default_targets);
            let r = accumulation_report(&t, &targets, window);
            let mut out = Output::new(&r);
            out.field("n", r.n.to_string());
            out.field("max_volume_sq", r.max_volume_sq.to_string());
            out.field("window", exact(&r.window));
            out.line("target\tbelow\tabove\tpresent");
            for row in &r.rows {
                out.line(format!("{}\t{}\t{}\t{}", row.target, row.below, row.above, row.present));
            }
            Ok(out)
        }
        ReportCmd::Mult { source, threshold } => {
            let t = load(source, 3, 10_000, threads)?;
            let r = multiplicity_report(&t, *threshold);
            let mut out = Output::new(&r);
            out.field("n", r.n.to_string());
            out.field("max_volume_sq", r.max_volume_sq.to_string());
            out.field("threshold", r.threshold.to_string());
            out.line("d\tmult\texpected_unbounded");
            for row in &r.rows {
                let flag = match row.expected_unbounded {
                    Some(true) => "yes",
                    Some(false) => "no",
                    None => "unknown",
                };
                out.line(format!("{}\t{}\t{}", row.d, row.mult, flag));
            }
            Ok(out)
        }
    }
}
