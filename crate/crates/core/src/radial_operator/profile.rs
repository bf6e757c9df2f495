use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{parse_q, parse_q_or_inf, to_f64, Q};

/// c · s^power · log(1/s)^log_power
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub coef: f64,
    pub power: f64,
    pub log_power: f64,
}

impl Monomial {
    pub fn constant(c: f64) -> Self {
        Monomial { coef: c, power: 0.0, log_power: 0.0 }
    }

    #[inline]
    pub fn eval(&self, s: f64) -> f64 {
        let mut v = self.coef;
        if self.power != 0.0 {
            v *= s.powf(self.power);
        }
        if self.log_power != 0.0 {
            v *= (-s.ln()).powf(self.log_power);
        }
        v
    }
}

/// One summand as written by the user: a monomial on [lo, hi].
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub lo: Q,
    /// `None` means +∞.
    pub hi: Option<Q>,
    pub monomial: Monomial,
}

/// Maximal interval on which the set of active monomials is constant.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub lo: Q,
    pub hi: Option<Q>,
    pub terms: Vec<Monomial>,
    lo_f: f64,
    hi_f: f64,
}

impl Piece {
    pub fn lo_f64(&self) -> f64 {
        self.lo_f
    }

    /// +∞ for unbounded pieces.
    pub fn hi_f64(&self) -> f64 {
        self.hi_f
    }

    #[inline]
    pub fn eval(&self, s: f64) -> f64 {
        self.terms.iter().map(|m| m.eval(s)).sum()
    }

    pub fn has_log(&self) -> bool {
        self.terms.iter().any(|m| m.log_power != 0.0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|m| m.power == 0.0 && m.log_power == 0.0)
    }
}

/// Radial profile f₀ on [0,∞): a finite sum of monomials on intervals.
/// Stored both as the user's terms and as disjoint pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    terms: Vec<Term>,
    pieces: Vec<Piece>,
}

impl RadialProfile {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::param("profile", "no terms"));
        }
        for t in &terms {
            validate_term(t)?;
        }
        let mut cuts: Vec<Q> = Vec::new();
        for t in &terms {
            cuts.push(t.lo.clone());
            if let Some(h) = &t.hi {
                cuts.push(h.clone());
            }
        }
        cuts.sort();
        cuts.dedup();
        let unbounded = terms.iter().any(|t| t.hi.is_none());
        let mut pieces = Vec::new();
        let mut segs: Vec<(Q, Option<Q>)> =
            cuts.windows(2).map(|w| (w[0].clone(), Some(w[1].clone()))).collect();
        if unbounded {
            segs.push((cuts.last().unwrap().clone(), None));
        }
        for (lo, hi) in segs {
            let active: Vec<Monomial> = terms
                .iter()
                .filter(|t| {
                    t.lo <= lo
                        && match (&t.hi, &hi) {
                            (None, _) => true,
                            (Some(th), Some(h)) => th >= h,
                            (Some(_), None) => false,
                        }
                })
                .map(|t| t.monomial)
                .collect();
            if !active.is_empty() {
                let lo_f = to_f64(&lo);
                let hi_f = hi.as_ref().map(to_f64).unwrap_or(f64::INFINITY);
                pieces.push(Piece { lo, hi, terms: active, lo_f, hi_f });
            }
        }
        Ok(RadialProfile { terms, pieces })
    }

    pub fn indicator(lo: Q, hi: Q) -> Result<Self> {
        Self::new(vec![Term { lo, hi: Some(hi), monomial: Monomial::constant(1.0) }])
    }

    pub fn monomial(coef: f64, power: f64, log_power: f64, lo: Q, hi: Option<Q>) -> Result<Self> {
        Self::new(vec![Term { lo, hi, monomial: Monomial { coef, power, log_power } }])
    }

    /// f ≡ 1 on [0, ∞).
    pub fn one() -> Self {
        Self::new(vec![Term { lo: Q::zero(), hi: None, monomial: Monomial::constant(1.0) }])
            .expect("constant profile is valid")
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn sum(&self, other: &RadialProfile) -> RadialProfile {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        RadialProfile::new(terms).expect("terms already validated")
    }

    pub fn scaled(&self, c: f64) -> RadialProfile {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { monomial: Monomial { coef: t.monomial.coef * c, ..t.monomial }, ..t.clone() })
            .collect();
        RadialProfile::new(terms).expect("terms already validated")
    }

    /// Index of the piece containing s (closed on both sides, first match).
    pub fn piece_index(&self, s: f64) -> Option<usize> {
        let i = self.pieces.partition_point(|p| p.hi_f < s);
        (i < self.pieces.len() && self.pieces[i].lo_f <= s).then_some(i)
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self.piece_index(s) {
            Some(i) => self.pieces[i].eval(s),
            None => 0.0,
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = Vec::new();
        for p in &self.pieces {
            v.push(p.lo_f);
            if p.hi_f.is_finite() {
                v.push(p.hi_f);
            }
        }
        v.dedup();
        v
    }

    /// Parse `chi(a,b)`, `pow(c, a, b, lo, hi)`, `one`, or a `+`-separated
    /// sum of these. `hi` may be `inf`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for part in split_sum(text) {
            terms.push(parse_term(part.trim())?);
        }
        Self::new(terms)
    }
}

fn split_sum(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

fn parse_f64(s: &str) -> Result<f64> {
    let s = s.trim();
    match s.parse::<f64>() {
        Ok(v) => Ok(v),
        Err(_) => parse_q(s).map(|q| to_f64(&q)),
    }
}

fn parse_term(text: &str) -> Result<Term> {
    if text == "one" || text == "one()" {
        return Ok(Term { lo: Q::zero(), hi: None, monomial: Monomial::constant(1.0) });
    }
    let open = text
        .find('(')
        .ok_or_else(|| Error::Parse(format!("expected `name(args)`, found `{text}`")))?;
    if !text.ends_with(')') {
        return Err(Error::Parse(format!("unbalanced parentheses in `{text}`")));
    }
    let name = text[..open].trim();
    let args: Vec<&str> = text[open + 1..text.len() - 1].split(',').map(str::trim).collect();
    match (name, args.len()) {
        ("chi", 2) => Ok(Term {
            lo: parse_q(args[0])?,
            hi: parse_q_or_inf(args[1])?,
            monomial: Monomial::constant(1.0),
        }),
        ("pow", 5) => Ok(Term {
            lo: parse_q(args[3])?,
            hi: parse_q_or_inf(args[4])?,
            monomial: Monomial {
                coef: parse_f64(args[0])?,
                power: parse_f64(args[1])?,
                log_power: parse_f64(args[2])?,
            },
        }),
        _ => Err(Error::Parse(format!(
            "unknown profile term `{text}` (expected chi(a,b), pow(c,a,b,lo,hi) or one)"
        ))),
    }
}

fn validate_term(t: &Term) -> Result<()> {
    let m = &t.monomial;
    if !(m.coef.is_finite() && m.power.is_finite() && m.log_power.is_finite()) {
        return Err(Error::param("profile", "non-finite coefficient or exponent"));
    }
    if t.lo < Q::zero() {
        return Err(Error::param("profile", format!("support starts at negative radius {}", t.lo)));
    }
    if let Some(h) = &t.hi {
        if *h <= t.lo {
            return Err(Error::param("profile", format!("empty support [{}, {h}]", t.lo)));
        }
    }
    if m.log_power != 0.0 {
        match &t.hi {
            Some(h) if *h <= Q::one() => {}
            _ => {
                return Err(Error::param(
                    "profile",
                    "log factors are only allowed on supports inside [0,1]",
                ))
            }
        }
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hi = self.hi.as_ref().map(|h| h.to_string()).unwrap_or_else(|| "inf".into());
        let m = &self.monomial;
        if m.coef == 1.0 && m.power == 0.0 && m.log_power == 0.0 {
            if self.lo.is_zero() && self.hi.is_none() {
                write!(f, "one")
            } else {
                write!(f, "chi({}, {hi})", self.lo)
            }
        } else {
            write!(f, "pow({}, {}, {}, {}, {hi})", m.coef, m.power, m.log_power, self.lo)
        }
    }
}

impl fmt::Display for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", s.join(" + "))
    }
}
