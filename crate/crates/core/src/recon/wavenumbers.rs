use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ModeIndex;

/// How the truncation order `N` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationRule {
    /// `N = 5 [delta^(-1/4)]`
    Paper,
    /// `N = 2 [delta^(-1/3)]`
    Alt,
    Fixed(usize),
}

/// `[x]`: the smallest integer `>= x`, with values within 1e-9 of an integer snapped to it.
fn bracket(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() <= 1e-9 {
        r as usize
    } else {
        x.ceil() as usize
    }
}

pub fn truncation_order(delta: f64, rule: TruncationRule) -> Result<usize> {
    let (factor, exponent) = match rule {
        TruncationRule::Fixed(n) if n >= 1 => return Ok(n),
        TruncationRule::Fixed(_) => return Err(Error::invalid("fixed truncation order must be at least 1")),
        TruncationRule::Paper => (5, -0.25),
        TruncationRule::Alt => (2, -1.0 / 3.0),
    };
    if delta == 0.0 {
        return Err(Error::invalid("noise-dependent truncation is undefined at delta = 0; give a fixed N"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("noise level must lie in (0, 1), got {delta}")));
    }
    Ok(factor * bracket(delta.powf(exponent)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavenumberEntry {
    pub l: ModeIndex<f64>,
    pub k: f64,
    /// Index into [`WavenumberTable::distinct_k`].
    pub distinct: usize,
}

/// `k_l = (2 pi / a)|l|` for `1 <= |l|_inf <= N`, and `k_l0 = (2 pi / a) lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavenumberTable {
    pub a: f64,
    pub n: usize,
    pub lambda: f64,
    /// Factor multiplying `|l|`; `2 pi / a` unless overridden.
    pub k_scale: f64,
    /// Integer modes in row-major `(l1, l2)` order, then the zero mode last.
    pub entries: Vec<WavenumberEntry>,
    /// Distinct wavenumbers in increasing order; the zero mode's comes first.
    pub distinct_k: Vec<f64>,
}

pub fn admissible_wavenumbers(n: usize, a: f64, lambda: f64) -> Result<WavenumberTable> {
    WavenumberTable::new(n, a, lambda, None)
}

impl WavenumberTable {
    pub fn new(n: usize, a: f64, lambda: f64, k_scale: Option<f64>) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid("truncation order must be at least 1"));
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::invalid(format!("period must be positive, got {a}")));
        }
        let c = TAU / a;
        if !(lambda > 0.0 && c * lambda < 0.5) {
            return Err(Error::invalid(format!("lambda must satisfy 0 < (2pi/a) lambda < 1/2, got {lambda}")));
        }
        let scale = k_scale.unwrap_or(c);
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::invalid(format!("k_scale must be positive, got {scale}")));
        }
        let ni = n as i32;
        // Squared norms identify equal wavenumbers exactly.
        let mut by_norm2: BTreeMap<i64, usize> = BTreeMap::new();
        for l1 in -ni..=ni {
            for l2 in -ni..=ni {
                if (l1, l2) != (0, 0) {
                    by_norm2.insert(i64::from(l1 * l1 + l2 * l2), 0);
                }
            }
        }
        let mut distinct_k = vec![scale * lambda];
        for (i, (m2, slot)) in by_norm2.iter_mut().enumerate() {
            *slot = i + 1;
            distinct_k.push(scale * (*m2 as f64).sqrt());
        }
        let mut entries = Vec::with_capacity((2 * n + 1).pow(2));
        for l1 in -ni..=ni {
            for l2 in -ni..=ni {
                if (l1, l2) == (0, 0) {
                    continue;
                }
                let d = by_norm2[&i64::from(l1 * l1 + l2 * l2)];
                entries.push(WavenumberEntry { l: ModeIndex::integer(l1, l2), k: distinct_k[d], distinct: d });
            }
        }
        entries.push(WavenumberEntry { l: ModeIndex::shifted_zero(lambda), k: distinct_k[0], distinct: 0 });
        Ok(Self { a, n, lambda, k_scale: scale, entries, distinct_k })
    }

    pub fn zero_mode(&self) -> &WavenumberEntry {
        self.entries.last().expect("table always holds the zero mode")
    }

    /// Integer-mode entries.
    pub fn integer_entries(&self) -> &[WavenumberEntry] {
        &self.entries[..self.entries.len() - 1]
    }

    /// Modes measured at each distinct wavenumber.
    pub fn modes_by_k(&self) -> Vec<Vec<ModeIndex<f64>>> {
        let mut out = vec![Vec::new(); self.distinct_k.len()];
        for e in &self.entries {
            out[e.distinct].push(e.l);
        }
        out
    }
}
