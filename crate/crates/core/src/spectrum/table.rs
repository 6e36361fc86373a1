use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub const TABLE_VERSION: u32 = 1;
/// Witnesses kept per key.
pub const WITNESS_CAP: usize = 8;

pub const CANONICAL_SORTED: &str = "sorted absolute values (permutations and sign flips identified)";
pub const CANONICAL_ORDERINGS: &str = "distinct orderings of absolute values (sign flips identified)";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub mult: u64,
    /// Lexicographic; the `WITNESS_CAP` smallest by volume.
    pub witnesses: Vec<Vec<u64>>,
}

/// D-values of 1-dimensional subtori up to a volume bound, with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumTable {
    pub n: usize,
    pub k: usize,
    pub max_volume_sq: u64,
    pub canonicalization: String,
    pub entries: BTreeMap<Rational, SpectrumEntry>,
}

#[derive(Serialize, Deserialize)]
struct EntryRecord {
    d: Rational,
    mult: u64,
    witnesses: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct TableRecord {
    version: u32,
    n: usize,
    k: usize,
    max_volume_sq: u64,
    canonicalization: String,
    entries: Vec<EntryRecord>,
}

#[derive(Serialize)]
struct FlatRow<'a> {
    d: &'a Rational,
    d_decimal: String,
    ml: Rational,
    ml_decimal: String,
    mult: u64,
    first_witness: String,
}

impl SpectrumTable {
    pub fn new(n: usize, max_volume_sq: u64, canonicalization: &str) -> Self {
        SpectrumTable {
            n,
            k: 1,
            max_volume_sq,
            canonicalization: canonicalization.to_string(),
            entries: BTreeMap::new(),
        }
    }

    /// Keys from largest to smallest.
    pub fn keys_desc(&self) -> impl Iterator<Item = &Rational> {
        self.entries.keys().rev()
    }

    pub fn max_key(&self) -> Option<&Rational> {
        self.entries.keys().next_back()
    }

    pub fn get(&self, d: &Rational) -> Option<&SpectrumEntry> {
        self.entries.get(d)
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.values().map(|e| e.mult).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        let record = TableRecord {
            version: TABLE_VERSION,
            n: self.n,
            k: self.k,
            max_volume_sq: self.max_volume_sq,
            canonicalization: self.canonicalization.clone(),
            entries: self
                .entries
                .iter()
                .rev()
                .map(|(d, e)| EntryRecord {
                    d: d.clone(),
                    mult: e.mult,
                    witnesses: e.witnesses.clone(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&record)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let record: TableRecord = serde_json::from_str(s)?;
        if record.version != TABLE_VERSION {
            return Err(Error::Format(format!(
                "unsupported table version {} (expected {})",
                record.version, TABLE_VERSION
            )));
        }
        let mut entries = BTreeMap::new();
        for e in record.entries {
            if e.mult == 0 || e.d.is_negative() || e.d >= Rational::half() {
                return Err(Error::Format(format!("invalid entry {} with multiplicity {}", e.d, e.mult)));
            }
            let prev = entries.insert(
                e.d.clone(),
                SpectrumEntry {
                    mult: e.mult,
                    witnesses: e.witnesses,
                },
            );
            if prev.is_some() {
                return Err(Error::Format(format!("duplicate key {}", e.d)));
            }
        }
        Ok(SpectrumTable {
            n: record.n,
            k: record.k,
            max_volume_sq: record.max_volume_sq,
            canonicalization: record.canonicalization,
            entries,
        })
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(self.to_json()?.as_bytes())?;
        w.write_all(b"\n")?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut BufReader::new(File::open(path)?), &mut s)?;
        Self::from_json(&s)
    }

    /// One row per key with exact and decimal columns for `d` and `ml = 1/2 - d`.
    pub fn write_flat<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for (d, e) in self.entries.iter().rev() {
            let ml = Rational::half() - d;
            let first = e
                .witnesses
                .first()
                .map(|t| t.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
                .unwrap_or_default();
            out.serialize(FlatRow {
                d,
                d_decimal: d.to_decimal(12),
                ml_decimal: ml.to_decimal(12),
                ml,
                mult: e.mult,
                first_witness: first,
            })?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_flat_file(&self, path: &Path) -> Result<()> {
        self.write_flat(BufWriter::new(File::create(path)?))
    }
}
