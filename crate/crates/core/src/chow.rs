//! Truncated graded-ring arithmetic for the Chow rings of `P^d` and
//! `(P^1)^n` with integer coefficients, the corank-1 and corank-2
//! degeneracy-locus classes of a symmetric morphism, the blow-up rank
//! bookkeeping for K-theory, and the semiorthogonal-decomposition ledgers
//! of the four fourfolds tracked by this crate.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChowError {
    #[error("classes live in different rings")]
    RingMismatch,
    #[error("expected a homogeneous class of degree {expected}")]
    DegreeMismatch { expected: u32 },
    #[error("blow-up centers have codimension at least 2, got {0}")]
    BadCodim(u32),
    #[error("cannot parse {0:?} as a class in this ring")]
    Parse(String),
}

/// A graded polynomial ring with degree-1 generators and per-generator
/// truncation: `gen^trunc = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedRing {
    gens: Vec<(String, u32)>,
}

impl GradedRing {
    /// The Chow ring of `P^d`: one generator `h` with `h^(d+1) = 0`.
    pub fn projective(d: u32) -> GradedRing {
        GradedRing {
            gens: vec![("h".to_string(), d + 1)],
        }
    }

    /// The Chow ring of `(P^1)^n`: generators `h1..hn` with `hi^2 = 0`.
    pub fn multi_p1(n: u32) -> GradedRing {
        GradedRing {
            gens: (1..=n).map(|i| (format!("h{i}"), 2)).collect(),
        }
    }

    pub fn generator_count(&self) -> usize {
        self.gens.len()
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.gens.iter().map(|(n, _)| n.as_str()).collect()
    }
}

/// An integer-coefficient class in a truncated graded ring, stored as a
/// sorted exponent-tuple map with no zero terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowClass {
    ring: GradedRing,
    terms: BTreeMap<Vec<u32>, i64>,
}

impl ChowClass {
    pub fn zero(ring: &GradedRing) -> ChowClass {
        ChowClass {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &GradedRing, c: i64) -> ChowClass {
        let mut out = ChowClass::zero(ring);
        out.insert(vec![0; ring.generator_count()], c);
        out
    }

    pub fn generator(ring: &GradedRing, index: usize) -> ChowClass {
        assert!(index < ring.generator_count(), "no such generator");
        let mut exp = vec![0; ring.generator_count()];
        exp[index] = 1;
        let mut out = ChowClass::zero(ring);
        out.insert(exp, 1);
        out
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, exp: Vec<u32>, c: i64) {
        if c == 0 {
            return;
        }
        // Truncation: any exponent at or above its bound kills the term.
        if exp
            .iter()
            .zip(&self.ring.gens)
            .any(|(&e, (_, trunc))| e >= *trunc)
        {
            return;
        }
        let entry = self.terms.entry(exp).or_insert(0);
        *entry += c;
        if *entry == 0 {
            let dead: Vec<Vec<u32>> = self
                .terms
                .iter()
                .filter(|(_, &v)| v == 0)
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }

    pub fn coefficient_of(&self, exponents: &[u32]) -> i64 {
        assert_eq!(exponents.len(), self.ring.generator_count());
        self.terms.get(exponents).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, i64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn add(&self, rhs: &ChowClass) -> Result<ChowClass, ChowError> {
        if self.ring != rhs.ring {
            return Err(ChowError::RingMismatch);
        }
        let mut out = self.clone();
        for (exp, c) in &rhs.terms {
            out.insert(exp.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &ChowClass) -> Result<ChowClass, ChowError> {
        self.add(&rhs.scale(-1))
    }

    pub fn scale(&self, c: i64) -> ChowClass {
        let mut out = ChowClass::zero(&self.ring);
        for (exp, v) in &self.terms {
            out.insert(exp.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, rhs: &ChowClass) -> Result<ChowClass, ChowError> {
        if self.ring != rhs.ring {
            return Err(ChowError::RingMismatch);
        }
        let mut out = ChowClass::zero(&self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(exp, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> ChowClass {
        let mut out = ChowClass::constant(&self.ring, 1);
        for _ in 0..k {
            out = out.mul(self).expect("same ring");
        }
        out
    }

    /// True when every term has the given total degree (vacuously for 0).
    pub fn is_homogeneous_of(&self, degree: u32) -> bool {
        self.terms
            .keys()
            .all(|exp| exp.iter().sum::<u32>() == degree)
    }

    /// Parses integer-coefficient monomial sums like `4h`, `6h^2`,
    /// `2h1h2 - h3`, or a bare integer.
    pub fn parse(ring: &GradedRing, text: &str) -> Result<ChowClass, ChowError> {
        let bad = || ChowError::Parse(text.to_string());
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut out = ChowClass::zero(ring);
        let chars: Vec<char> = compact.chars().collect();
        let mut i = 0;
        let mut sign: i64 = 1;
        // Leading sign.
        if chars[i] == '+' || chars[i] == '-' {
            sign = if chars[i] == '-' { -1 } else { 1 };
            i += 1;
            if i == chars.len() {
                return Err(bad());
            }
        }
        while i < chars.len() {
            // Optional integer coefficient.
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let mut coeff: i64 = if i > start {
                compact[start..i].parse().map_err(|_| bad())?
            } else {
                1
            };
            coeff *= sign;
            // Monomial: longest-match generator names, optional ^exp, optional '*'.
            let mut exp = vec![0u32; ring.generator_count()];
            let mut saw_gen = false;
            loop {
                if i < chars.len() && chars[i] == '*' {
                    i += 1;
                    continue;
                }
                let rest: String = chars[i..].iter().collect();
                let hit = ring
                    .gens
                    .iter()
                    .enumerate()
                    .filter(|(_, (name, _))| rest.starts_with(name.as_str()))
                    .max_by_key(|(_, (name, _))| name.len());
                let Some((g, (name, _))) = hit else {
                    break;
                };
                i += name.len();
                saw_gen = true;
                let mut e = 1u32;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                    let estart = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == estart {
                        return Err(bad());
                    }
                    e = compact[estart..i].parse().map_err(|_| bad())?;
                }
                exp[g] += e;
            }
            if i == start && !saw_gen {
                // Consumed nothing: unknown token.
                return Err(bad());
            }
            out.insert(exp, coeff);
            // Next term needs an explicit sign.
            if i < chars.len() {
                sign = match chars[i] {
                    '+' => 1,
                    '-' => -1,
                    _ => return Err(bad()),
                };
                i += 1;
                if i == chars.len() {
                    return Err(bad());
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in &self.terms {
            let mono: String = exp
                .iter()
                .zip(&self.ring.gens)
                .filter(|(&e, _)| e > 0)
                .map(|(&e, (name, _))| {
                    if e == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect::<Vec<_>>()
                .join("");
            let mag = c.abs();
            let body = if mono.is_empty() {
                format!("{mag}")
            } else if mag == 1 {
                mono
            } else {
                format!("{mag}{mono}")
            };
            if first {
                if *c < 0 {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
                first = false;
            } else if *c < 0 {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

/// Classes of the corank-1 and corank-2 loci of a symmetric morphism with
/// the given Chern classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyClasses {
    /// `2 c1`
    pub discriminant: ChowClass,
    /// `4 (c1 c2 - c3)`
    pub corank2: ChowClass,
}

pub fn degeneracy_classes(
    c1: &ChowClass,
    c2: &ChowClass,
    c3: &ChowClass,
) -> Result<DegeneracyClasses, ChowError> {
    if c1.ring() != c2.ring() || c1.ring() != c3.ring() {
        return Err(ChowError::RingMismatch);
    }
    for (c, d) in [(c1, 1u32), (c2, 2), (c3, 3)] {
        if !c.is_homogeneous_of(d) {
            return Err(ChowError::DegreeMismatch { expected: d });
        }
    }
    let discriminant = c1.scale(2);
    let corank2 = c1.mul(c2)?.sub(c3)?.scale(4);
    Ok(DegeneracyClasses {
        discriminant,
        corank2,
    })
}

/// Rank of `K_0` after blowing up a center of the given codimension:
/// `base + (codim - 1) * center`.
pub fn blowup_k0_rank(base_rank: u64, center_rank: u64, codim: u32) -> Result<u64, ChowError> {
    if codim < 2 {
        return Err(ChowError::BadCodim(codim));
    }
    Ok(base_rank + u64::from(codim - 1) * center_rank)
}

/// One component of a semiorthogonal decomposition: either an exceptional
/// block with an integer rank, or a category listed symbolically because no
/// rank is asserted for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub label: String,
    pub rank: Option<u64>,
}

impl LedgerEntry {
    fn counted(label: &str, rank: u64) -> LedgerEntry {
        LedgerEntry {
            label: label.to_string(),
            rank: Some(rank),
        }
    }

    fn symbolic(label: &str) -> LedgerEntry {
        LedgerEntry {
            label: label.to_string(),
            rank: None,
        }
    }
}

/// Bookkeeping of a semiorthogonal decomposition: every component is
/// listed; only integer-ranked ones enter the exceptional total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SODLedger {
    pub name: String,
    pub entries: Vec<LedgerEntry>,
}

impl SODLedger {
    /// Sum of the integer-ranked entries; symbolic components are excluded,
    /// never silently counted.
    pub fn exceptional_total(&self) -> u64 {
        self.entries.iter().filter_map(|e| e.rank).sum()
    }

    pub fn has_symbolic_entries(&self) -> bool {
        self.entries.iter().any(|e| e.rank.is_none())
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The fourfold obtained from `P^4` by blowing up seven points and
/// antiflipping the lines through pairs of them: 5 + 21 + 22 exceptional
/// objects, with 21 arising as one object per line through two of the
/// seven points.
pub fn ledger_b9() -> SODLedger {
    let lines_through_pairs = binomial(7, 2);
    assert_eq!(lines_through_pairs, 21, "pair count of seven points");
    SODLedger {
        name: "b9".to_string(),
        entries: vec![
            LedgerEntry::counted("P4 exceptional collection", 5),
            LedgerEntry::counted("blown-up points", lines_through_pairs),
            LedgerEntry::counted("antiflipped lines", 22),
        ],
    }
}

/// The multidegree-(1,1,1,1) divisor in `(P^1)^4`: sixteen line bundles
/// indexed by 0/1 exponent tuples, plus a K3-type category with no rank
/// asserted.
pub fn ledger_d3() -> SODLedger {
    SODLedger {
        name: "d3".to_string(),
        entries: vec![
            LedgerEntry::counted("line bundles", 16),
            LedgerEntry::symbolic("K3 category"),
        ],
    }
}

/// The fourfold with three line bundles, three exceptional-divisor pushforwards
/// and a residual category.
pub fn ledger_c7() -> SODLedger {
    SODLedger {
        name: "c7".to_string(),
        entries: vec![
            LedgerEntry::counted("line bundles", 3),
            LedgerEntry::counted("exceptional-divisor objects", 3),
            LedgerEntry::symbolic("residual category A_X"),
        ],
    }
}

/// The quadric-bundle fourfold: four line bundles plus the derived category
/// of the even Clifford algebra.
pub fn ledger_b4() -> SODLedger {
    SODLedger {
        name: "b4".to_string(),
        entries: vec![
            LedgerEntry::counted("line bundles", 4),
            LedgerEntry::symbolic("Clifford component"),
        ],
    }
}

pub fn ledger_by_name(name: &str) -> Option<SODLedger> {
    match name {
        "b9" => Some(ledger_b9()),
        "d3" => Some(ledger_d3()),
        "c7" => Some(ledger_c7()),
        "b4" => Some(ledger_b4()),
        _ => None,
    }
}
