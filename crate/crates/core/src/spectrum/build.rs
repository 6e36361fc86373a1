use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::{visit_block, EnumerationSpec};
use super::table::{SpectrumEntry, SpectrumTable, CANONICAL_ORDERINGS, CANONICAL_SORTED, WITNESS_CAP};
use crate::error::{Error, Result};
use crate::loneliness::{d_subtorus1, scan_fixed, SpeedTuple, FAST_SPEED_LIMIT};
use crate::rational::Rational;

/// Environment variable consulted for the worker count.
pub const THREADS_ENV: &str = "LRSPEC_THREADS";

#[derive(Clone, Debug, Default)]
pub struct BuildOptions {
    /// Overrides `THREADS_ENV`; `None` and no variable means rayon's default.
    pub threads: Option<usize>,
    /// JSON-lines sidecar recording finished blocks; resumed when present.
    pub checkpoint: Option<PathBuf>,
    /// Incremented once per processed tuple.
    pub progress: Option<Arc<AtomicU64>>,
}

impl BuildOptions {
    pub fn resolved_threads(&self) -> Result<Option<usize>> {
        if let Some(t) = self.threads {
            return Ok(Some(t));
        }
        match std::env::var(THREADS_ENV) {
            Ok(s) => s
                .trim()
                .parse::<usize>()
                .map(Some)
                .map_err(|_| Error::InvalidArgument(format!("{}={:?} is not a thread count", THREADS_ENV, s))),
            Err(_) => Ok(None),
        }
    }
}

/// `D` of a sorted positive primitive tuple as a reduced `(num, den)`.
pub fn d_of_tuple(t: &[u64]) -> (u64, u64) {
    if t.iter().all(|&x| x <= FAST_SPEED_LIMIT) {
        return scan_fixed(t).d_value();
    }
    let signed: Vec<i64> = t.iter().map(|&x| x as i64).collect();
    let d = d_subtorus1(&SpeedTuple::from_i64s(&signed).expect("valid tuple"));
    (
        d.numer().to_u64().expect("small numerator"),
        d.denom().to_u64().expect("small denominator"),
    )
}

pub(crate) fn volume(t: &[u64]) -> u64 {
    t.iter().map(|x| x * x).sum()
}

/// Partial aggregate for a set of tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Partial {
    pub map: BTreeMap<(u64, u64), Agg>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Agg {
    pub mult: u64,
    /// Sorted by (volume, lex), at most `WITNESS_CAP`.
    pub witnesses: Vec<(u64, Vec<u64>)>,
}

impl Agg {
    fn offer(&mut self, w: (u64, Vec<u64>)) {
        if self.witnesses.len() == WITNESS_CAP && w >= *self.witnesses.last().expect("full") {
            return;
        }
        let pos = self.witnesses.binary_search(&w).unwrap_or_else(|p| p);
        if self.witnesses.get(pos) != Some(&w) {
            self.witnesses.insert(pos, w);
            self.witnesses.truncate(WITNESS_CAP);
        }
    }

    fn merge(&mut self, other: Agg) {
        self.mult += other.mult;
        for w in other.witnesses {
            self.offer(w);
        }
    }
}

impl Partial {
    pub fn add(&mut self, key: (u64, u64), weight: u64, t: &[u64]) {
        let e = self.map.entry(key).or_default();
        e.mult += weight;
        e.offer((volume(t), t.to_vec()));
    }

    pub fn merge(mut self, other: Partial) -> Partial {
        for (k, a) in other.map {
            self.map.entry(k).or_default().merge(a);
        }
        self
    }
}

/// Number of distinct orderings of a sorted tuple.
fn orderings(t: &[u64]) -> u64 {
    let mut total: u64 = (1..=t.len() as u64).product();
    let mut i = 0;
    while i < t.len() {
        let j = (i..t.len()).find(|&j| t[j] != t[i]).unwrap_or(t.len());
        total /= (1..=(j - i) as u64).product::<u64>();
        i = j;
    }
    total
}

pub(crate) fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {}", e)))?;
            Ok(pool.install(f))
        }
    }
}

#[derive(Serialize, Deserialize, PartialEq, Eq)]
struct CheckpointHeader {
    version: u32,
    n: usize,
    max_volume_sq: u64,
    canonical_only: bool,
}

#[derive(Serialize, Deserialize)]
struct CheckpointBlock {
    first: u64,
    entries: Vec<CheckpointEntry>,
}

#[derive(Serialize, Deserialize)]
struct CheckpointEntry {
    d: Rational,
    mult: u64,
    witnesses: Vec<Vec<u64>>,
}

impl CheckpointBlock {
    fn from_partial(first: u64, p: &Partial) -> Self {
        CheckpointBlock {
            first,
            entries: p
                .map
                .iter()
                .map(|(&(a, b), agg)| CheckpointEntry {
                    d: Rational::new(a, b),
                    mult: agg.mult,
                    witnesses: agg.witnesses.iter().map(|(_, w)| w.clone()).collect(),
                })
                .collect(),
        }
    }

    fn into_partial(self) -> Result<Partial> {
        let mut p = Partial::default();
        for e in self.entries {
            let key = (
                e.d.numer().to_u64().ok_or_else(|| Error::Format("bad checkpoint key".into()))?,
                e.d.denom().to_u64().ok_or_else(|| Error::Format("bad checkpoint key".into()))?,
            );
            let agg = p.map.entry(key).or_default();
            agg.mult = e.mult;
            for w in e.witnesses {
                agg.offer((volume(&w), w));
            }
        }
        Ok(p)
    }
}

fn load_checkpoint(path: &PathBuf, header: &CheckpointHeader) -> Result<BTreeMap<u64, Partial>> {
    let mut done = BTreeMap::new();
    if !path.exists() {
        let mut f = File::create(path)?;
        writeln!(f, "{}", serde_json::to_string(header)?)?;
        return Ok(done);
    }
    let mut text = std::fs::read_to_string(path)?;
    if !text.ends_with('\n') {
        // a torn final line from an interrupted write is dropped and redone
        text.truncate(text.rfind('\n').map_or(0, |i| i + 1));
        std::fs::write(path, &text)?;
    }
    let mut lines = text.lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::Format("empty checkpoint".into()))?;
    let found: CheckpointHeader = serde_json::from_str(first)?;
    if &found != header {
        return Err(Error::Format(format!(
            "checkpoint {} belongs to a different build",
            path.display()
        )));
    }
    for line in lines {
        let block: CheckpointBlock = serde_json::from_str(line)?;
        done.insert(block.first, block.into_partial()?);
    }
    Ok(done)
}

pub fn build_spectrum(spec: &EnumerationSpec) -> Result<SpectrumTable> {
    build_spectrum_with(spec, &BuildOptions::default())
}

/// Applies the 1-dimensional D-value to every enumerated tuple in parallel
/// blocks keyed by the smallest coordinate. Blocks merge commutatively, so
/// the table does not depend on scheduling.
pub fn build_spectrum_with(spec: &EnumerationSpec, opts: &BuildOptions) -> Result<SpectrumTable> {
    spec.validate()?;
    let header = CheckpointHeader {
        version: 1,
        n: spec.n,
        max_volume_sq: spec.max_volume_sq,
        canonical_only: spec.canonical_only,
    };
    let done = match &opts.checkpoint {
        Some(p) => load_checkpoint(p, &header)?,
        None => BTreeMap::new(),
    };
    let finished: BTreeSet<u64> = done.keys().copied().collect();
    let todo: Vec<u64> = (1..=spec.max_first()).filter(|f| !finished.contains(f)).collect();
    let sink = match &opts.checkpoint {
        Some(p) => Some(Mutex::new(OpenOptions::new().append(true).open(p)?)),
        None => None,
    };
    let (n, max, canonical) = (spec.n, spec.max_volume_sq, spec.canonical_only);
    let progress = opts.progress.clone();

    let fresh: Vec<Result<Partial>> = with_pool(opts.resolved_threads()?, || {
        todo.par_iter()
            .map(|&first| {
                let mut p = Partial::default();
                visit_block(n, max, first, &mut |t| {
                    let w = if canonical { 1 } else { orderings(t) };
                    p.add(d_of_tuple(t), w, t);
                    if let Some(c) = &progress {
                        c.fetch_add(1, Ordering::Relaxed);
                    }
                });
                if let Some(s) = &sink {
                    let line = serde_json::to_string(&CheckpointBlock::from_partial(first, &p))?;
                    let mut f = s.lock().expect("checkpoint lock");
                    writeln!(f, "{}", line)?;
                    f.flush()?;
                }
                Ok(p)
            })
            .collect()
    })?;

    let mut total = Partial::default();
    for p in done.into_values() {
        total = total.merge(p);
    }
    for p in fresh {
        total = total.merge(p?);
    }
    let mut table = SpectrumTable::new(
        n,
        max,
        if canonical { CANONICAL_SORTED } else { CANONICAL_ORDERINGS },
    );
    for ((a, b), agg) in total.map {
        let mut witnesses: Vec<Vec<u64>> = agg.witnesses.into_iter().map(|(_, w)| w).collect();
        witnesses.sort();
        table.entries.insert(
            Rational::new(a, b),
            SpectrumEntry {
                mult: agg.mult,
                witnesses,
            },
        );
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn small_tables() {
        let t = build_spectrum(&EnumerationSpec::new(2, 5).unwrap()).unwrap();
        assert_eq!(t.entries.len(), 2);
        assert_eq!(t.get(&q(0, 1)).unwrap().witnesses, vec![vec![1, 1]]);
        assert_eq!(t.get(&q(1, 6)).unwrap().witnesses, vec![vec![1, 2]]);

        let t = build_spectrum(&EnumerationSpec::new(1, 1000).unwrap()).unwrap();
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.get(&q(0, 1)).unwrap().mult, 1);

        let t = build_spectrum(&EnumerationSpec::new(3, 14).unwrap()).unwrap();
        assert!(t.get(&q(1, 4)).unwrap().witnesses.contains(&vec![1, 2, 3]));
        assert_eq!(t.max_key(), Some(&q(1, 4)));
    }

    #[test]
    fn thread_count_does_not_change_the_table() {
        let spec = EnumerationSpec::new(3, 900).unwrap();
        let one = build_spectrum_with(&spec, &BuildOptions { threads: Some(1), ..Default::default() }).unwrap();
        let four = build_spectrum_with(&spec, &BuildOptions { threads: Some(4), ..Default::default() }).unwrap();
        assert_eq!(one.to_json().unwrap(), four.to_json().unwrap());
    }

    #[test]
    fn witnesses_are_capped_and_smallest() {
        let t = build_spectrum(&EnumerationSpec::new(3, 2000).unwrap()).unwrap();
        for e in t.entries.values() {
            assert!(e.witnesses.len() <= WITNESS_CAP);
            assert!(e.witnesses.len() as u64 == e.mult.min(WITNESS_CAP as u64));
            assert!(e.witnesses.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn orderings_weighting() {
        assert_eq!(orderings(&[1, 1, 2]), 3);
        assert_eq!(orderings(&[1, 2, 3]), 6);
        let mut spec = EnumerationSpec::new(3, 30).unwrap();
        let sorted = build_spectrum(&spec).unwrap();
        spec.canonical_only = false;
        let all = build_spectrum(&spec).unwrap();
        let expected: u64 = super::super::enumerate::enumerate_proper_primitive(&spec).count() as u64;
        assert_eq!(all.total_multiplicity(), expected);
        assert_eq!(
            sorted.entries.keys().collect::<Vec<_>>(),
            all.entries.keys().collect::<Vec<_>>()
        );
    }

    #[test]
    fn checkpoint_resume_matches_fresh_build() {
        let dir = std::env::temp_dir().join(format!("lrspec-ckpt-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("build.ckpt");
        let _ = std::fs::remove_file(&path);
        let spec = EnumerationSpec::new(3, 600).unwrap();
        let fresh = build_spectrum(&spec).unwrap();
        let opts = BuildOptions { checkpoint: Some(path.clone()), ..Default::default() };
        let first = build_spectrum_with(&spec, &opts).unwrap();
        assert_eq!(first, fresh);
        // drop the last two blocks and a torn line, then resume
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines: Vec<&str> = text.lines().collect();
        lines.truncate(lines.len() - 2);
        let mut kept = lines.join("\n");
        kept.push_str("\n{\"first\": 9, \"entr");
        std::fs::write(&path, kept).unwrap();
        let resumed = build_spectrum_with(&spec, &opts).unwrap();
        assert_eq!(resumed, fresh);
        let other = EnumerationSpec::new(3, 700).unwrap();
        assert!(matches!(build_spectrum_with(&other, &opts), Err(Error::Format(_))));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
