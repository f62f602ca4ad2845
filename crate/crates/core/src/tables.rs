//! Published bounds for `s = 1/2` and known antipodal kissing numbers.

use std::sync::OnceLock;

use rug::{Complete, Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::certify::BoundResult;
use crate::construct::FormSpec;
use crate::error::{Error, Result};
use crate::numeric::{even_floor, even_floor_rational, parse_rational, parse_real, rel_diff};

const REGISTRY_CSV: &str = include_str!("../data/registry.csv");

/// Registry value: an exact rational, or the decimal digits as printed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableValue {
    Exact(Rational),
    /// Truncated decimal as printed.
    Decimal(String),
}

impl TableValue {
    pub fn to_float(&self, prec: u32) -> Float {
        match self {
            TableValue::Exact(q) => Float::with_val(prec, q),
            TableValue::Decimal(s) => parse_real(s, prec).expect("registry decimals are validated on load"),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            TableValue::Exact(q) => Some(q),
            TableValue::Decimal(_) => None,
        }
    }

    /// One unit in the last printed place (zero for exact values).
    pub fn printed_ulp(&self) -> Option<Rational> {
        match self {
            TableValue::Exact(_) => None,
            TableValue::Decimal(s) => {
                let frac = s.split_once('.').map_or(0, |(_, f)| f.len());
                Some(Rational::from((1, Integer::u_pow_u(10, frac as u32).complete())))
            }
        }
    }

    pub fn even_floor(&self) -> Integer {
        match self {
            TableValue::Exact(q) => even_floor_rational(q),
            TableValue::Decimal(_) => even_floor(&self.to_float(256)),
        }
    }
}

impl std::fmt::Display for TableValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TableValue::Exact(q) => write!(f, "{q}"),
            TableValue::Decimal(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub m: u32,
    pub w: TableValue,
    pub k: usize,
    pub form: u8,
    /// Degree as printed.
    pub degree: usize,
    pub table: u8,
}

impl TableEntry {
    pub fn spec(&self) -> FormSpec {
        FormSpec::new(self.form, self.k).expect("registry specs are validated on load")
    }

    pub fn degree_consistent(&self) -> bool {
        self.spec().degree() == self.degree
    }
}

#[derive(Debug, Deserialize)]
struct Row {
    m: u32,
    w: String,
    #[serde(rename = "K")]
    k: usize,
    form: u8,
    degree: usize,
    table: u8,
}

fn parse_registry(text: &str) -> Result<Vec<TableEntry>> {
    let mut out = Vec::new();
    for row in csv::Reader::from_reader(text.as_bytes()).deserialize() {
        let r: Row = row?;
        let w = if r.table == 1 {
            TableValue::Exact(parse_rational(&r.w)?)
        } else {
            parse_real(&r.w, 64)?;
            TableValue::Decimal(r.w)
        };
        FormSpec::new(r.form, r.k).map_err(|e| Error::Parse(format!("registry m={}: {e}", r.m)))?;
        out.push(TableEntry { m: r.m, w, k: r.k, form: r.form, degree: r.degree, table: r.table });
    }
    out.sort_by_key(|e| e.m);
    Ok(out)
}

/// All registry rows, sorted by `m`.
pub fn registry() -> &'static [TableEntry] {
    static REG: OnceLock<Vec<TableEntry>> = OnceLock::new();
    REG.get_or_init(|| parse_registry(REGISTRY_CSV).expect("bundled registry parses"))
}

pub fn known_bound(m: u32) -> Option<&'static TableEntry> {
    registry().binary_search_by_key(&m, |e| e.m).ok().map(|i| &registry()[i])
}

/// Rows that disagree with the form degree formula or with monotonicity in `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Anomaly {
    DegreeMismatch { m: u32, printed: usize, expected: usize },
    NotIncreasing { m: u32, previous: u32 },
}

pub fn anomalies() -> Vec<Anomaly> {
    let reg = registry();
    let mut out = Vec::new();
    for e in reg {
        if !e.degree_consistent() {
            out.push(Anomaly::DegreeMismatch { m: e.m, printed: e.degree, expected: e.spec().degree() });
        }
    }
    for pair in reg.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b.m == a.m + 1 && b.w.to_float(128) <= a.w.to_float(128) {
            out.push(Anomaly::NotIncreasing { m: b.m, previous: a.m });
        }
    }
    out
}

pub fn is_anomalous(m: u32) -> bool {
    anomalies().iter().any(|a| match a {
        Anomaly::DegreeMismatch { m: x, .. } | Anomaly::NotIncreasing { m: x, .. } => *x == m,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tau {
    Exact(u64),
    AtMost(u64),
}

impl Tau {
    pub fn value(&self) -> u64 {
        match self {
            Tau::Exact(v) | Tau::AtMost(v) => *v,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KnownTau {
    pub m: u32,
    pub tau: Tau,
}

pub const KNOWN_TAU: &[KnownTau] = &[
    KnownTau { m: 2, tau: Tau::Exact(6) },
    KnownTau { m: 3, tau: Tau::Exact(12) },
    KnownTau { m: 4, tau: Tau::Exact(24) },
    KnownTau { m: 5, tau: Tau::Exact(40) },
    KnownTau { m: 6, tau: Tau::Exact(72) },
    KnownTau { m: 7, tau: Tau::Exact(126) },
    KnownTau { m: 8, tau: Tau::Exact(240) },
    KnownTau { m: 10, tau: Tau::AtMost(548) },
    KnownTau { m: 14, tau: Tau::AtMost(2938) },
    KnownTau { m: 24, tau: Tau::Exact(196560) },
];

pub fn known_tau(m: u32) -> Option<KnownTau> {
    KNOWN_TAU.iter().copied().find(|t| t.m == m)
}

/// `even_floor(w) - τ` for a known `τ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauGap {
    pub tau: KnownTau,
    pub even_floor: String,
    pub gap: i128,
}

pub fn tau_gap(m: u32, even_floor: &Integer) -> Option<TauGap> {
    let tau = known_tau(m)?;
    let gap = Integer::from(even_floor - tau.tau.value()).to_i128()?;
    Some(TauGap { tau, even_floor: even_floor.to_string(), gap })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchStatus {
    /// Exact rational equality.
    Exact,
    /// Within one unit of the last printed digit.
    Printed,
    Mismatch,
}

#[derive(Clone, Debug)]
pub struct Comparison {
    pub entry: &'static TableEntry,
    pub rel_diff: Float,
    pub status: MatchStatus,
    pub tau_gap: Option<TauGap>,
}

/// Compares a computed bound with the registry row for `m`.
pub fn compare(m: u32, computed: &BoundResult) -> Option<Comparison> {
    let entry = known_bound(m)?;
    let prec = computed.w.prec().max(128);
    let reg = entry.w.to_float(prec);
    let rd = rel_diff(&computed.w, &reg);
    let status = match (&entry.w, &computed.w_exact) {
        (TableValue::Exact(q), Some(c)) if q == c => MatchStatus::Exact,
        (TableValue::Exact(_), _) => MatchStatus::Mismatch,
        (TableValue::Decimal(_), _) => {
            let ulp = Float::with_val(prec, entry.w.printed_ulp().as_ref().unwrap());
            let diff = Float::with_val(prec, &computed.w - &reg);
            // Printed digits are truncated: the true value lies in [printed, printed + ulp).
            if diff >= Float::with_val(prec, -&ulp) && diff <= ulp {
                MatchStatus::Printed
            } else {
                MatchStatus::Mismatch
            }
        }
    };
    Some(Comparison { entry, rel_diff: rd, status, tau_gap: tau_gap(m, &computed.even_floor) })
}
