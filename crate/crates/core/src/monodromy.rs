//! Words in the generators a, b of SL(2,Z) and the rewriting of the global
//! monodromy of E(n).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 4]", into = "[i64; 4]")]
pub struct Sl2Matrix {
    m: [i64; 4],
}

impl TryFrom<[i64; 4]> for Sl2Matrix {
    type Error = Error;

    fn try_from(m: [i64; 4]) -> Result<Self> {
        Sl2Matrix::new(m[0], m[1], m[2], m[3])
    }
}

impl From<Sl2Matrix> for [i64; 4] {
    fn from(s: Sl2Matrix) -> Self {
        s.m
    }
}

impl Sl2Matrix {
    pub fn new(m11: i64, m12: i64, m21: i64, m22: i64) -> Result<Self> {
        let det = (m11 as i128) * (m22 as i128) - (m12 as i128) * (m21 as i128);
        if det != 1 {
            return Err(Error::invalid(format!("determinant is {det}, not 1")));
        }
        Ok(Sl2Matrix { m: [m11, m12, m21, m22] })
    }

    pub const IDENTITY: Sl2Matrix = Sl2Matrix { m: [1, 0, 0, 1] };

    /// a^k = [[1, k], [0, 1]]
    pub fn a_pow(k: i64) -> Self {
        Sl2Matrix { m: [1, k, 0, 1] }
    }

    /// b^k = [[1, 0], [-k, 1]]
    pub fn b_pow(k: i64) -> Result<Self> {
        let nk = k.checked_neg().ok_or(Error::Overflow("sl2 power"))?;
        Ok(Sl2Matrix { m: [1, 0, nk, 1] })
    }

    pub fn a() -> Self {
        Self::a_pow(1)
    }

    pub fn b() -> Self {
        Sl2Matrix { m: [1, 0, -1, 1] }
    }

    pub fn entries(&self) -> [i64; 4] {
        self.m
    }

    pub fn det(&self) -> i128 {
        let [p, q, r, s] = self.m.map(i128::from);
        p * s - q * r
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn mul(&self, other: &Sl2Matrix) -> Result<Sl2Matrix> {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        let dot = |x: i64, y: i64, z: i64, w: i64| -> Result<i64> {
            x.checked_mul(y)
                .and_then(|p| z.checked_mul(w).and_then(|q| p.checked_add(q)))
                .ok_or(Error::Overflow("sl2 product"))
        };
        Ok(Sl2Matrix { m: [dot(a, e, b, g)?, dot(a, f, b, h)?, dot(c, e, d, g)?, dot(c, f, d, h)?] })
    }

    pub fn inverse(&self) -> Sl2Matrix {
        let [a, b, c, d] = self.m;
        Sl2Matrix { m: [d, -b, -c, a] }
    }
}

impl fmt::Display for Sl2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    A,
    B,
}

impl Generator {
    fn power(self, k: i64) -> Result<Sl2Matrix> {
        match self {
            Generator::A => Ok(Sl2Matrix::a_pow(k)),
            Generator::B => Sl2Matrix::b_pow(k),
        }
    }

    fn symbol(self) -> char {
        match self {
            Generator::A => 'a',
            Generator::B => 'b',
        }
    }
}

/// A word stored as maximal runs `g^k`, k != 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonodromyWord {
    runs: Vec<(Generator, i64)>,
}

impl MonodromyWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_runs(runs: impl IntoIterator<Item = (Generator, i64)>) -> Result<Self> {
        let mut w = Self::empty();
        for (g, k) in runs {
            w.push(g, k)?;
        }
        Ok(w)
    }

    pub fn runs(&self) -> &[(Generator, i64)] {
        &self.runs
    }

    pub fn push(&mut self, g: Generator, k: i64) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        match self.runs.last_mut() {
            Some((last, e)) if *last == g => {
                *e = e.checked_add(k).ok_or(Error::Overflow("word exponent"))?;
                if *e == 0 {
                    self.runs.pop();
                }
            }
            _ => self.runs.push((g, k)),
        }
        Ok(())
    }

    pub fn concat(&self, other: &MonodromyWord) -> Result<MonodromyWord> {
        let mut w = self.clone();
        for &(g, k) in &other.runs {
            w.push(g, k)?;
        }
        Ok(w)
    }

    pub fn pow(&self, n: u32) -> Result<MonodromyWord> {
        let mut w = Self::empty();
        for _ in 0..n {
            w = w.concat(self)?;
        }
        Ok(w)
    }

    pub fn inverse(&self) -> MonodromyWord {
        MonodromyWord { runs: self.runs.iter().rev().map(|&(g, k)| (g, -k)).collect() }
    }

    /// Number of letters, counting a^k as |k| letters.
    pub fn letter_len(&self) -> u64 {
        self.runs.iter().map(|&(_, k)| k.unsigned_abs()).sum()
    }

    /// (#a letters, #b letters), counting inverse letters too.
    pub fn letter_counts(&self) -> (u64, u64) {
        let count = |gen| self.runs.iter().filter(|r| r.0 == gen).map(|r| r.1.unsigned_abs()).sum();
        (count(Generator::A), count(Generator::B))
    }

    /// One entry per letter: (generator, +1 or -1).
    pub fn letters(&self) -> Vec<(Generator, i8)> {
        self.runs
            .iter()
            .flat_map(|&(g, k)| std::iter::repeat_n((g, k.signum() as i8), k.unsigned_abs() as usize))
            .collect()
    }

    fn from_letters(letters: &[(Generator, i8)]) -> MonodromyWord {
        let mut w = Self::empty();
        for &(g, s) in letters {
            w.push(g, i64::from(s)).expect("unit exponents cannot overflow");
        }
        w
    }

    /// Left-to-right product of the generator matrices.
    pub fn eval(&self) -> Result<Sl2Matrix> {
        self.runs
            .iter()
            .try_fold(Sl2Matrix::IDENTITY, |acc, &(g, k)| acc.mul(&g.power(k)?))
    }

    /// Moves the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> MonodromyWord {
        let mut letters = self.letters();
        if !letters.is_empty() {
            let len = letters.len();
            letters.rotate_left(k % len);
        }
        Self::from_letters(&letters)
    }

    pub fn parse(text: &str) -> Result<MonodromyWord> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let w = p.sequence()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected character"));
        }
        Ok(w)
    }
}

impl fmt::Display for MonodromyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return write!(f, "1");
        }
        for (i, &(g, k)) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", g.symbol())?;
            if k != 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for MonodromyWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// word := factor*; factor := (letter | '(' word ')') ('^' int)?
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sequence(&mut self) -> Result<MonodromyWord> {
        let mut w = MonodromyWord::empty();
        loop {
            let base = match self.peek() {
                Some(b'a') | Some(b'b') => {
                    let g = if self.src[self.pos] == b'a' { Generator::A } else { Generator::B };
                    self.pos += 1;
                    MonodromyWord::from_runs([(g, 1)])?
                }
                Some(b'(') => {
                    self.pos += 1;
                    let inner = self.sequence()?;
                    if self.peek() != Some(b')') {
                        return Err(self.error("expected ')'"));
                    }
                    self.pos += 1;
                    inner
                }
                Some(b'1') => {
                    self.pos += 1;
                    MonodromyWord::empty()
                }
                Some(b')') | None => return Ok(w),
                Some(_) => return Err(self.error("unknown letter; expected a, b, 1 or '('")),
            };
            let factor = match self.peek() {
                Some(b'^') => {
                    self.pos += 1;
                    let e = self.exponent()?;
                    let (word, e) = if e < 0 { (base.inverse(), -e) } else { (base, e) };
                    let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
                    word.pow(e)?
                }
                _ => base,
            };
            w = w.concat(&factor)?;
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        digits.parse::<i64>().map_err(|_| Error::Parse { position: start, message: "expected an integer exponent".into() })
    }
}

/// (ab)^{6n}
pub fn global_monodromy(n: u32) -> Result<MonodromyWord> {
    if n < 1 {
        return Err(Error::invalid("n must be at least 1"));
    }
    MonodromyWord::from_runs([(Generator::A, 1), (Generator::B, 1)])?.pow(6 * n)
}

/// (a^2 b a^3 b a^3 b a)^n
pub fn intermediate_form(n: u32) -> Result<MonodromyWord> {
    use Generator::*;
    MonodromyWord::from_runs([(A, 2), (B, 1), (A, 3), (B, 1), (A, 3), (B, 1), (A, 1)])?.pow(n)
}

/// (a^3 b a^3 b a^3 b)^n
pub fn rotated_form(n: u32) -> Result<MonodromyWord> {
    use Generator::*;
    MonodromyWord::from_runs([(A, 3), (B, 1), (A, 3), (B, 1), (A, 3), (B, 1)])?.pow(n)
}

/// Witness that `target` is `source` with its first `offset` letters moved
/// to the end; then eval(target) = C eval(source) C^-1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rotation {
    pub offset: usize,
    pub conjugator: Sl2Matrix,
}

pub fn cyclically_equal(w1: &MonodromyWord, w2: &MonodromyWord) -> bool {
    rotation_between(w1, w2).is_some()
}

/// Smallest rotation taking `w1` to `w2`, with its conjugation certificate.
pub fn rotation_between(w1: &MonodromyWord, w2: &MonodromyWord) -> Option<Rotation> {
    let (l1, l2) = (w1.letters(), w2.letters());
    if l1.len() != l2.len() {
        return None;
    }
    let len = l1.len();
    let offset = (0..len.max(1)).find(|&k| (0..len).all(|i| l1[(i + k) % len] == l2[i]))?;
    let prefix = MonodromyWord::from_letters(&l1[..offset.min(len)]);
    let conjugator = prefix.eval().ok()?.inverse();
    Some(Rotation { offset, conjugator })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Eq1Report {
    pub n: u32,
    pub global_word: String,
    pub intermediate_word: String,
    pub rotated_word: String,
    pub global_is_identity: bool,
    pub matrices_agree: bool,
    pub rotation_offset: Option<usize>,
    pub conjugation_certified: bool,
    pub a_count: u64,
    pub b_count: u64,
    pub counts_match: bool,
    /// The local picture around one fibre shows 9 a-cycles plus 1 more;
    /// displayed alongside the global counts without reconciliation.
    pub local_view: (u64, u64),
}

impl Eq1Report {
    pub fn passed(&self) -> bool {
        self.global_is_identity && self.matrices_agree && self.conjugation_certified && self.counts_match
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.global_is_identity {
            out.push("global monodromy does not evaluate to the identity");
        }
        if !self.matrices_agree {
            out.push("global and intermediate forms evaluate differently");
        }
        if !self.conjugation_certified {
            out.push("intermediate and rotated forms are not cyclic rotations");
        }
        if !self.counts_match {
            out.push("letter counts differ from (9n, 3n)");
        }
        out
    }
}

pub fn verify_eq1(n: u32) -> Result<Eq1Report> {
    let global = global_monodromy(n)?;
    let mid = intermediate_form(n)?;
    let rot = rotated_form(n)?;
    let g = global.eval()?;
    let m = mid.eval()?;
    let rotation = rotation_between(&mid, &rot);
    let conjugation_certified = match &rotation {
        Some(r) => {
            let lhs = rot.eval()?;
            let rhs = r.conjugator.mul(&m)?.mul(&r.conjugator.inverse())?;
            lhs == rhs
        }
        None => false,
    };
    let (a_count, b_count) = rot.letter_counts();
    let n64 = u64::from(n);
    Ok(Eq1Report {
        n,
        global_word: format!("(a b)^{}", 6 * n),
        intermediate_word: format!("(a^2 b a^3 b a^3 b a)^{n}"),
        rotated_word: format!("(a^3 b a^3 b a^3 b)^{n}"),
        global_is_identity: g.is_identity(),
        matrices_agree: g == m,
        rotation_offset: rotation.map(|r| r.offset),
        conjugation_certified,
        a_count,
        b_count,
        counts_match: (a_count, b_count) == (9 * n64, 3 * n64),
        local_view: (9, 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> MonodromyWord {
        s.parse().unwrap()
    }

    #[test]
    fn generators() {
        assert_eq!(w("a").eval().unwrap().entries(), [1, 1, 0, 1]);
        assert_eq!(w("b").eval().unwrap().entries(), [1, 0, -1, 1]);
        assert!(MonodromyWord::empty().eval().unwrap().is_identity());
    }

    #[test]
    fn ab_to_the_sixth_is_trivial() {
        assert!(w("(a b)^6").eval().unwrap().is_identity());
        assert!(!w("(a b)^3").eval().unwrap().is_identity());
    }

    #[test]
    fn braid_relation() {
        assert_eq!(w("a b a").eval().unwrap(), w("b a b").eval().unwrap());
    }

    #[test]
    fn parser_forms() {
        assert_eq!(w("a^3 b a^3 b a^3 b"), w("a^3b a^3b a^3b"));
        assert_eq!(w("(a^3 b)^3"), w("a^3 b a^3 b a^3 b"));
        assert_eq!(w("a a^-1"), MonodromyWord::empty());
        assert_eq!(w("(a b)^-1"), w("b^-1 a^-1"));
        assert_eq!(w("((a)^2 b)^2").to_string(), "a^2 b a^2 b");
        assert!(matches!(MonodromyWord::parse("a c"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(MonodromyWord::parse("(a b"), Err(Error::Parse { .. })));
        assert!(matches!(MonodromyWord::parse("a^x"), Err(Error::Parse { position: 2, .. })));
    }

    #[test]
    fn runs_stay_maximal() {
        let word = MonodromyWord::from_runs([(Generator::A, 2), (Generator::A, -2), (Generator::B, 1)]).unwrap();
        assert_eq!(word.runs(), &[(Generator::B, 1)]);
    }

    #[test]
    fn global_word_lengths() {
        assert_eq!(global_monodromy(1).unwrap().letter_len(), 12);
        assert_eq!(global_monodromy(2).unwrap().letter_len(), 24);
        assert!(global_monodromy(0).is_err());
    }

    #[test]
    fn cyclic_equality() {
        assert!(cyclically_equal(&w("a b"), &w("b a")));
        assert!(cyclically_equal(&w("a^2 b a^3 b a^3 b a"), &w("a^3 b a^3 b a^3 b")));
        assert!(!cyclically_equal(&w("a^3 b"), &w("a b^3")));
        assert!(cyclically_equal(&MonodromyWord::empty(), &MonodromyWord::empty()));
    }

    #[test]
    fn rotation_certificate() {
        let src = w("a^2 b a^3 b a^3 b a");
        let dst = w("a^3 b a^3 b a^3 b");
        let r = rotation_between(&src, &dst).unwrap();
        assert_eq!(r.offset, 3);
        let c = r.conjugator;
        assert_eq!(dst.eval().unwrap(), c.mul(&src.eval().unwrap()).unwrap().mul(&c.inverse()).unwrap());
    }

    #[test]
    fn eq1_small_cases() {
        for n in [1, 2, 5] {
            let r = verify_eq1(n).unwrap();
            assert!(r.passed(), "{:?}", r.failures());
        }
        let r = verify_eq1(2).unwrap();
        assert_eq!((r.a_count, r.b_count), (18, 6));
    }

    #[test]
    fn sl2_rejects_bad_determinant() {
        assert!(Sl2Matrix::new(2, 0, 0, 1).is_err());
        assert!(Sl2Matrix::try_from([1, 2, 3, 7]).is_ok());
    }
}
