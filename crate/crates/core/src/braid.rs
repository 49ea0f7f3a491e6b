//! Pure braids in the generators T(i,j), bridge presentations and the
//! dotted-circle skeleton of (S^3 - nu K) x S^1.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::link::{ComponentKind, FramedLink};

/// One factor T(i,j)^e, 1-based strands, i < j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidFactor {
    pub i: usize,
    pub j: usize,
    pub exponent: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PureBraidWord {
    pub strands: usize,
    pub factors: Vec<BraidFactor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub valid: bool,
    pub diagnostics: Vec<String>,
    /// Underlying permutation, 0-based images. Identity for valid words.
    pub permutation: Option<Vec<usize>>,
}

impl PureBraidWord {
    pub fn new(strands: usize, factors: Vec<BraidFactor>) -> Self {
        PureBraidWord { strands, factors }
    }

    pub fn identity(strands: usize) -> Self {
        Self::new(strands, Vec::new())
    }

    pub fn generator(strands: usize, i: usize, j: usize, exponent: i64) -> Self {
        Self::new(strands, vec![BraidFactor { i, j, exponent }])
    }

    /// Parses `T(2,5)^2 T(1,3)^-1`. Errors carry the byte offset of the
    /// offending token.
    pub fn parse(strands: usize, text: &str) -> Result<Self> {
        let src = text.as_bytes();
        let mut pos = 0;
        let mut factors = Vec::new();
        let err = |position: usize, message: &str| Error::Parse { position, message: message.to_string() };
        let skip = |pos: &mut usize| {
            while src.get(*pos).is_some_and(u8::is_ascii_whitespace) {
                *pos += 1;
            }
        };
        let expect = |pos: &mut usize, c: u8| -> Result<()> {
            skip(pos);
            if src.get(*pos) == Some(&c) {
                *pos += 1;
                Ok(())
            } else {
                Err(err(*pos, &format!("expected '{}'", c as char)))
            }
        };
        let int = |pos: &mut usize| -> Result<i64> {
            skip(pos);
            let start = *pos;
            if matches!(src.get(*pos), Some(b'-') | Some(b'+')) {
                *pos += 1;
            }
            while src.get(*pos).is_some_and(u8::is_ascii_digit) {
                *pos += 1;
            }
            std::str::from_utf8(&src[start..*pos])
                .expect("ascii")
                .parse()
                .map_err(|_| err(start, "expected an integer"))
        };

        loop {
            skip(&mut pos);
            let Some(&c) = src.get(pos) else { break };
            if c != b'T' {
                return Err(err(pos, "expected generator 'T(i,j)'"));
            }
            let start = pos;
            pos += 1;
            expect(&mut pos, b'(')?;
            let i = int(&mut pos)?;
            expect(&mut pos, b',')?;
            let j = int(&mut pos)?;
            expect(&mut pos, b')')?;
            skip(&mut pos);
            let exponent = if src.get(pos) == Some(&b'^') {
                pos += 1;
                int(&mut pos)?
            } else {
                1
            };
            let (i, j) = match (usize::try_from(i), usize::try_from(j)) {
                (Ok(i), Ok(j)) => (i, j),
                _ => return Err(err(start, "strand indices must be positive")),
            };
            if !(1 <= i && i < j && j <= strands) {
                return Err(err(start, &format!("T({i},{j}) is not a generator on {strands} strands")));
            }
            if exponent == 0 {
                return Err(err(start, "exponent must be nonzero"));
            }
            factors.push(BraidFactor { i, j, exponent });
        }
        Ok(PureBraidWord { strands, factors })
    }

    pub fn concat(&self, other: &PureBraidWord) -> Result<PureBraidWord> {
        if self.strands != other.strands {
            return Err(Error::invalid("strand counts differ"));
        }
        let mut factors = self.factors.clone();
        factors.extend(&other.factors);
        Ok(PureBraidWord { strands: self.strands, factors })
    }

    pub fn inverse(&self) -> PureBraidWord {
        let factors = self
            .factors
            .iter()
            .rev()
            .map(|f| BraidFactor { exponent: -f.exponent, ..*f })
            .collect();
        PureBraidWord { strands: self.strands, factors }
    }

    fn factor_problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.strands == 0 {
            out.push("strand count must be positive".to_string());
        }
        for (k, f) in self.factors.iter().enumerate() {
            if !(1 <= f.i && f.i < f.j && f.j <= self.strands) {
                out.push(format!("factor {k}: ({},{}) violates 1 <= i < j <= {}", f.i, f.j, self.strands));
            }
            if f.exponent == 0 {
                out.push(format!("factor {k}: zero exponent"));
            }
        }
        out
    }

    pub fn validate(&self) -> Validation {
        let mut diagnostics = self.factor_problems();
        if !diagnostics.is_empty() {
            return Validation { valid: false, diagnostics, permutation: None };
        }
        let perm = self.permutation();
        if perm.iter().enumerate().any(|(k, &p)| k != p) {
            diagnostics.push("underlying permutation is not the identity".into());
        }
        Validation { valid: diagnostics.is_empty(), diagnostics, permutation: Some(perm) }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().valid
    }

    /// Artin letters: T(i,j) = s_{j-1} ... s_{i+1} s_i^2 s_{i+1}^-1 ... s_{j-1}^-1,
    /// each letter (k, +-1) for s_k. Exponents are expanded letter by letter.
    pub fn artin_letters(&self) -> Vec<(usize, i8)> {
        let mut out = Vec::new();
        for f in &self.factors {
            let mut one: Vec<(usize, i8)> = (f.i + 1..f.j).rev().map(|k| (k, 1)).collect();
            one.push((f.i, 1));
            one.push((f.i, 1));
            one.extend((f.i + 1..f.j).map(|k| (k, -1)));
            let block: Vec<(usize, i8)> = if f.exponent > 0 {
                one
            } else {
                one.iter().rev().map(|&(k, s)| (k, -s)).collect()
            };
            for _ in 0..f.exponent.unsigned_abs() {
                out.extend(&block);
            }
        }
        out
    }

    /// Strand permutation of the Artin expansion: entry k is where the strand
    /// starting at position k ends.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for (k, _) in self.artin_letters() {
            at.swap(k - 1, k);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        perm
    }

    /// Exponent sum per generator, zero entries dropped.
    pub fn abelianize(&self) -> BTreeMap<(usize, usize), i64> {
        let mut map = BTreeMap::new();
        for f in &self.factors {
            *map.entry((f.i, f.j)).or_insert(0) += f.exponent;
        }
        map.retain(|_, v| *v != 0);
        map
    }
}

impl fmt::Display for PureBraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, x) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "T({},{})", x.i, x.j)?;
            if x.exponent != 1 {
                write!(f, "^{}", x.exponent)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BridgePresentation {
    pub bridges: usize,
    pub braid: PureBraidWord,
}

impl BridgePresentation {
    pub fn new(bridges: usize, braid: PureBraidWord) -> Result<Self> {
        let p = BridgePresentation { bridges, braid };
        p.check()?;
        Ok(p)
    }

    /// The trivial braid on 2b strands.
    pub fn trivial(bridges: usize) -> Result<Self> {
        Self::new(bridges, PureBraidWord::identity(2 * bridges))
    }

    pub fn check(&self) -> Result<()> {
        if self.bridges < 1 {
            return Err(Error::invalid("a presentation needs at least one bridge"));
        }
        if self.braid.strands != 2 * self.bridges {
            return Err(Error::invalid(format!(
                "braid on {} strands cannot close up {} bridges",
                self.braid.strands, self.bridges
            )));
        }
        let v = self.braid.validate();
        if !v.valid {
            return Err(Error::invalid(v.diagnostics.join("; ")));
        }
        Ok(())
    }
}

/// b(T_{p,q}) = min(p, q).
pub fn torus_bridge_number(p: u64, q: u64) -> Result<u64> {
    if p == 0 || q == 0 {
        return Err(Error::invalid("torus knot parameters must be positive"));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime(p as i64, q as i64));
    }
    Ok(p.min(q))
}

/// 1-handles of (S^3 - nu K) x S^1 from a b-bridge presentation.
pub fn one_handle_count(bridges: u64) -> Result<u64> {
    if bridges < 1 {
        return Err(Error::invalid("bridge number must be at least 1"));
    }
    Ok(bridges + 1)
}

/// Bridge containing 1-based strand `i`: strands 2b-1 and 2b close up bridge b.
pub fn bridge_of_strand(i: usize) -> usize {
    i.div_ceil(2)
}

pub fn commutator_label(bridge: usize) -> String {
    if bridge == 1 {
        "centered".to_string()
    } else {
        format!("k{bridge}")
    }
}

/// Skeleton of (S^3 - nu K) x S^1 for a b-bridge presentation.
///
/// Layout (all 2-handles 0-framed):
/// - dotted `s`, then dotted `x1..xb` (one per bridge);
/// - `centered`, no dotted linking;
/// - for each bridge 2..=b, a commutator `kB` with no dotted linking and a
///   ferry `rB` running +1 over `x1` and -1 over `xB`;
/// - b-1 three-handles.
///
/// Commutator handles of distinct bridges link by the abelianized exponent
/// sums of generators joining those bridges; bridge 1 uses `centered`.
pub fn emit_surgery_skeleton(pres: &BridgePresentation) -> Result<FramedLink> {
    pres.check()?;
    let b = pres.bridges;
    let mut link = FramedLink::empty();
    link.push(ComponentKind::Dotted, &[], Some("s".into()))?;
    let xs: Vec<usize> = (1..=b)
        .map(|k| link.push(ComponentKind::Dotted, &[], Some(format!("x{k}"))))
        .collect::<Result<_>>()?;
    let zero = ComponentKind::TwoHandle { framing: 0 };
    let mut commutators = vec![link.push(zero, &[], Some(commutator_label(1)))?];
    for beta in 2..=b {
        commutators.push(link.push(zero, &[], Some(commutator_label(beta)))?);
        link.push(zero, &[(xs[0], 1), (xs[beta - 1], -1)], Some(format!("r{beta}")))?;
    }
    for ((i, j), e) in pres.braid.abelianize() {
        let (bi, bj) = (bridge_of_strand(i), bridge_of_strand(j));
        if bi == bj {
            continue;
        }
        let (u, v) = (commutators[bi - 1], commutators[bj - 1]);
        let value = link.linking(u, v).checked_add(e).ok_or(Error::Overflow("skeleton linking"))?;
        link.set_sym(u, v, value);
    }
    link.set_three_handles(b as u64 - 1);
    Ok(link)
}
