use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use lonely_spectrum::lattice::{c_star, lrc_threshold, PiEnclosure, PowerBound};
use lonely_spectrum::spectrum::{
    accumulation_report, certify_absence_with, verify_closed_form_s2, verify_family_fan_sun, verify_window,
    CertifyOptions, SpectrumTable, WindowMode,
};
use lonely_spectrum::subgroups::{d_finite_cyclic, FiniteCyclicSubgroup};
use lonely_spectrum::{Rational, Result, TorusPoint};
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::build;
use crate::output::{verdict, Output};

#[derive(Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    detail: Value,
}

#[derive(Serialize)]
struct Manifest {
    version: u32,
    pass: bool,
    checks: Vec<Check>,
    tables: Vec<String>,
}

struct Runner<'a> {
    dir: &'a Path,
    threads: Option<usize>,
    checks: Vec<Check>,
    timings: BTreeMap<&'static str, f64>,
    tables: Vec<String>,
}

impl Runner<'_> {
    fn time<T>(&mut self, name: &'static str, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let r = f(self);
        self.timings.insert(name, start.elapsed().as_secs_f64());
        r
    }

    fn record(&mut self, name: &'static str, pass: bool, detail: Value) {
        self.checks.push(Check { name, pass, detail });
    }

    fn table(&mut self, name: &'static str, n: usize, max: u64) -> Result<SpectrumTable> {
        let t = self.time(name, |r| build(n, max, r.threads))?;
        let stem = format!("s{}_{}", n, max);
        t.write_json(&self.dir.join("tables").join(format!("{}.json", stem)))?;
        t.write_flat_file(&self.dir.join("flat").join(format!("{}.csv", stem)))?;
        self.tables.push(stem);
        Ok(t)
    }
}

pub fn run(dir: &Path, threads: Option<usize>) -> Result<Output> {
    fs::create_dir_all(dir.join("tables"))?;
    fs::create_dir_all(dir.join("flat"))?;
    let mut r = Runner {
        dir,
        threads,
        checks: Vec::new(),
        timings: BTreeMap::new(),
        tables: Vec::new(),
    };
    let q = Rational::new;

    let fam = r.time("fan_sun", |_| Ok(verify_family_fan_sun(100)))?;
    r.record("fan_sun", fam.pass, json!({ "r_max": fam.r_max, "failures": fam.failures }));

    let s2 = r.table("table_n2_1e6", 2, 1_000_000)?;
    let rep = verify_closed_form_s2(&s2)?;
    let largest_s = s2.entries.keys().filter(|d| !d.is_zero()).map(|d| (d.denom() - 2u32) / 4u32).max();
    r.record(
        "s2_closed_form",
        rep.pass,
        json!({
            "keys": rep.keys_checked,
            "largest_s": largest_s.map(|s| s.to_string()),
            "violations": rep.violations,
            "missing": rep.missing,
        }),
    );

    let g = FiniteCyclicSubgroup::new(TorusPoint::new(vec![q(12, 25), q(9, 25)]));
    let d = d_finite_cyclic(&g);
    r.record("subgroup_witness", d == q(7, 50), json!({ "generator": g.generator(), "d_value": d }));

    let mut lrc = Vec::new();
    for (name, max) in [("table_n3_14", 14), ("table_n3_1e3", 1_000), ("table_n3_1e4", 10_000)] {
        let t = r.table(name, 3, max)?;
        let top = t.max_key().cloned();
        let witnessed = t
            .get(&q(1, 4))
            .is_some_and(|e| e.witnesses.contains(&vec![1, 2, 3]));
        lrc.push((max, top, witnessed, t));
    }
    let lrc_pass = lrc.iter().all(|(_, top, w, _)| top.as_ref() == Some(&q(1, 4)) && *w);
    r.record(
        "lrc_n3",
        lrc_pass,
        Value::Array(
            lrc.iter()
                .map(|(max, top, w, _)| json!({ "max_volume_sq": max, "max_key": top, "witness_123": w }))
                .collect(),
        ),
    );

    let win_table = r.table("table_n3_4e4", 3, 40_000)?;
    let win = verify_window(&win_table, WindowMode::Strict)?;
    r.record(
        "window_n3_strict",
        win.pass,
        json!({ "in_window": win.in_window, "violations": win.violations }),
    );

    let threads = r.threads;
    let cert = r.time("prop81", |_| {
        certify_absence_with(&q(7, 50), 3, 199 * 199, None, &CertifyOptions { threads, pi: None })
    })?;
    r.record(
        "absence_7_50",
        cert.pass,
        json!({
            "tuples_checked": cert.exhaustive.tuples_checked,
            "hits": cert.exhaustive.hits,
            "phase_a": cert.exhaustive.pass,
            "phase_b": cert.symbolic.pass,
            "epsilon": cert.symbolic.epsilon,
        }),
    );

    let pi = PiEnclosure::default();
    let t2 = lrc_threshold(2)?;
    let t3 = lrc_threshold(3)?;
    let below: Vec<(u32, bool)> = (2..=12)
        .map(|n| Ok((n, PowerBound::new(n).exceeds(&lrc_threshold(n)?.upper(&pi)))))
        .collect::<Result<_>>()?;
    let cs = c_star(3, 1, &q(2, 25))?;
    let (lo, hi) = cs.bounds(&pi);
    let cpass = t2.lower(&pi) == 3
        && t2.upper(&pi) == 3
        && t3.to_string() == "144/π"
        && below.iter().all(|b| b.1)
        && lo > q(1989, 10)
        && hi < 199;
    r.record(
        "constants",
        cpass,
        json!({
            "lrc_threshold_2": t2.to_string(),
            "lrc_threshold_3": t3.to_string(),
            "below_power_bound": below,
            "c_star_3_1_2_25": { "symbolic": cs.to_string(), "lower": lo, "upper": hi },
        }),
    );

    let targets = [q(1, 6), q(1, 10), q(1, 14)];
    let (narrow, wide) = (q(1, 1000), q(1, 100));
    let below = accumulation_report(&lrc[2].3, &targets, &narrow);
    let small = accumulation_report(&lrc[1].3, &targets[..1], &wide);
    let large = accumulation_report(&lrc[2].3, &targets[..1], &wide);
    let acc_pass = below.rows.iter().all(|row| row.below == 0) && large.rows[0].above > small.rows[0].above;
    r.record(
        "accumulation_n3",
        acc_pass,
        json!({
            "below_window": narrow,
            "below_1e4": below.rows,
            "above_window": wide,
            "above_1_6": [small.rows[0].above, large.rows[0].above],
        }),
    );

    let pass = r.checks.iter().all(|c| c.pass);
    let manifest = Manifest {
        version: 1,
        pass,
        checks: r.checks,
        tables: r.tables,
    };
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    fs::write(dir.join("timings.json"), serde_json::to_string_pretty(&r.timings)? + "\n")?;

    let mut out = Output::new(&manifest);
    for c in &manifest.checks {
        out.line(format!("{:<20} {}", c.name, verdict(c.pass)));
    }
    out.field("manifest", dir.join("manifest.json").display().to_string());
    Ok(out.check(pass))
}
