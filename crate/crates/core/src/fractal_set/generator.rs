use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{from_f64_dyadic, is_integer, parse_q, qi, qpow, to_f64, Q};

use super::set::Interval;

/// Bits used when a power-sequence point n^{-a} is irrational.
const POWER_BITS: u32 = 48;

/// A named construction of a dilation set, printable and parseable as a
/// short expression such as `cantor(alpha=1/3, depth=8)`.
#[derive(Debug, Clone, PartialEq)]
pub enum FractalGenerator {
    FullInterval,
    FinitePoints(Vec<Q>),
    MiddleCantor { alpha: Q, depth: u32 },
    /// {2 - base^{-n} : 1 ≤ n ≤ count} ∪ {2}
    GeometricSequence { base: Q, count: u32 },
    /// {1 + n^{-exponent} : 1 ≤ n ≤ count} ∪ {1}
    PowerSequence { exponent: Q, count: u32 },
    /// {start + i·step : 0 ≤ i < count}, required to lie in `window`
    ArithmeticProgression { start: Q, step: Q, count: u32, window: (Q, Q) },
    Union(Vec<FractalGenerator>),
}

fn in_unit(x: &Q) -> bool {
    *x >= qi(1) && *x <= qi(2)
}

impl FractalGenerator {
    /// Construction depth: Cantor level or sequence length, max over unions.
    pub fn depth(&self) -> u32 {
        match self {
            Self::FullInterval | Self::FinitePoints(_) => 0,
            Self::MiddleCantor { depth, .. } => *depth,
            Self::GeometricSequence { count, .. }
            | Self::PowerSequence { count, .. }
            | Self::ArithmeticProgression { count, .. } => *count,
            Self::Union(parts) => parts.iter().map(|g| g.depth()).max().unwrap_or(0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::FullInterval => Ok(()),
            Self::FinitePoints(pts) => {
                if pts.is_empty() {
                    return Err(Error::param("points", "empty point list"));
                }
                match pts.iter().find(|p| !in_unit(p)) {
                    Some(p) => Err(Error::param("points", format!("{p} lies outside [1,2]"))),
                    None => Ok(()),
                }
            }
            Self::MiddleCantor { alpha, depth } => {
                if *alpha <= Q::zero() || *alpha >= Q::one() {
                    return Err(Error::param("alpha", format!("{alpha} not in (0,1)")));
                }
                if *depth > 24 {
                    return Err(Error::param("depth", "depth above 24 is not supported"));
                }
                Ok(())
            }
            Self::GeometricSequence { base, count } => {
                if *base <= Q::one() {
                    return Err(Error::param("base", format!("{base} must exceed 1")));
                }
                if *count == 0 {
                    return Err(Error::param("m", "count must be positive"));
                }
                Ok(())
            }
            Self::PowerSequence { exponent, count } => {
                if *exponent <= Q::zero() {
                    return Err(Error::param("a", format!("{exponent} must be positive")));
                }
                if *count == 0 {
                    return Err(Error::param("m", "count must be positive"));
                }
                Ok(())
            }
            Self::ArithmeticProgression { start, step, count, window } => {
                let (lo, hi) = window;
                if !(in_unit(lo) && in_unit(hi) && lo <= hi) {
                    return Err(Error::InvalidWindow(format!("[{lo},{hi}] not inside [1,2]")));
                }
                if *step <= Q::zero() {
                    return Err(Error::param("delta", "step must be positive"));
                }
                if *count == 0 {
                    return Err(Error::param("m", "count must be positive"));
                }
                let last = start + step * qi(*count as i64 - 1);
                if start < lo || &last > hi {
                    return Err(Error::param(
                        "u",
                        format!("progression [{start},{last}] leaves window [{lo},{hi}]"),
                    ));
                }
                Ok(())
            }
            Self::Union(parts) => {
                if parts.is_empty() {
                    return Err(Error::param("union", "empty union"));
                }
                parts.iter().try_for_each(|g| g.validate())
            }
        }
    }

    /// Raw (unmerged) intervals of the construction.
    pub(crate) fn raw_intervals(&self) -> Vec<Interval> {
        let pt = |x: Q| Interval::point(x);
        match self {
            Self::FullInterval => vec![Interval::new(qi(1), qi(2))],
            Self::FinitePoints(pts) => pts.iter().cloned().map(pt).collect(),
            Self::MiddleCantor { alpha, depth } => {
                let ratio = (Q::one() - alpha) / qi(2);
                let mut cur = vec![Interval::new(qi(1), qi(2))];
                for _ in 0..*depth {
                    let mut next = Vec::with_capacity(cur.len() * 2);
                    for iv in &cur {
                        let piece = (&iv.hi - &iv.lo) * &ratio;
                        next.push(Interval::new(iv.lo.clone(), &iv.lo + &piece));
                        next.push(Interval::new(&iv.hi - &piece, iv.hi.clone()));
                    }
                    cur = next;
                }
                cur
            }
            Self::GeometricSequence { base, count } => std::iter::once(qi(2))
                .chain((1..=*count as i64).map(|n| qi(2) - qpow(base, -n)))
                .map(pt)
                .collect(),
            Self::PowerSequence { exponent, count } => std::iter::once(qi(1))
                .chain((1..=*count as i64).map(|n| qi(1) + power_point(n, exponent)))
                .map(pt)
                .collect(),
            Self::ArithmeticProgression { start, step, count, .. } => (0..*count as i64)
                .map(|i| start + step * qi(i))
                .map(pt)
                .collect(),
            Self::Union(parts) => parts.iter().flat_map(|g| g.raw_intervals()).collect(),
        }
    }

    /// Finest scale at which the truncated construction still represents
    /// the intended set. `None` when the set is exact at every scale.
    pub fn resolution(&self) -> Option<Q> {
        match self {
            Self::FullInterval | Self::FinitePoints(_) | Self::ArithmeticProgression { .. } => None,
            Self::MiddleCantor { alpha, depth } => {
                Some(qpow(&((Q::one() - alpha) / qi(2)), *depth as i64))
            }
            Self::GeometricSequence { .. } | Self::PowerSequence { .. } => {
                let mut pts: Vec<Q> = self.raw_intervals().into_iter().map(|iv| iv.lo).collect();
                pts.sort();
                pts.dedup();
                pts.windows(2).map(|w| &w[1] - &w[0]).min()
            }
            Self::Union(parts) => parts.iter().filter_map(|g| g.resolution()).min(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let g = p.generator()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("trailing input in `{text}`")));
        }
        g.validate()?;
        Ok(g)
    }
}

fn power_point(n: i64, exponent: &Q) -> Q {
    if is_integer(exponent) {
        let e = exponent.to_integer();
        let e: i64 = e.try_into().unwrap_or(i64::MAX);
        qpow(&qi(n), -e)
    } else {
        from_f64_dyadic((n as f64).powf(-to_f64(exponent)), POWER_BITS)
    }
}

impl fmt::Display for FractalGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::FullInterval => write!(f, "interval"),
            Self::FinitePoints(pts) => {
                let s: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
                write!(f, "points({})", s.join(", "))
            }
            Self::MiddleCantor { alpha, depth } => write!(f, "cantor(alpha={alpha}, depth={depth})"),
            Self::GeometricSequence { base, count } => write!(f, "geometric(base={base}, m={count})"),
            Self::PowerSequence { exponent, count } => write!(f, "power(a={exponent}, m={count})"),
            Self::ArithmeticProgression { start, step, count, window } => write!(
                f,
                "progression(u={start}, delta={step}, m={count}, lo={}, hi={})",
                window.0, window.1
            ),
            Self::Union(parts) => {
                let s: Vec<String> = parts.iter().map(|g| g.to_string()).collect();
                write!(f, "union({})", s.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Atom(String),
    Open,
    Close,
    Comma,
    Eq,
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let flush = |cur: &mut String, out: &mut Vec<Tok>| {
        if !cur.is_empty() {
            out.push(Tok::Atom(std::mem::take(cur)));
        }
    };
    for c in text.chars() {
        match c {
            '(' | ')' | ',' | '=' => {
                flush(&mut cur, &mut out);
                out.push(match c {
                    '(' => Tok::Open,
                    ')' => Tok::Close,
                    ',' => Tok::Comma,
                    _ => Tok::Eq,
                });
            }
            c if c.is_whitespace() => flush(&mut cur, &mut out),
            c => cur.push(c),
        }
    }
    flush(&mut cur, &mut out);
    if out.is_empty() {
        return Err(Error::Parse("empty set expression".into()));
    }
    Ok(out)
}

enum Arg {
    Named(String, String),
    Value(String),
    Nested(Box<FractalGenerator>),
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn atom(&mut self) -> Result<String> {
        match self.tokens.get(self.pos) {
            Some(Tok::Atom(a)) => {
                self.pos += 1;
                Ok(a.clone())
            }
            other => Err(Error::Parse(format!("expected a name or value, found {other:?}"))),
        }
    }

    fn args(&mut self) -> Result<Vec<Arg>> {
        let mut args = Vec::new();
        if self.peek() != Some(&Tok::Open) {
            return Ok(args);
        }
        self.pos += 1;
        if self.peek() == Some(&Tok::Close) {
            self.pos += 1;
            return Ok(args);
        }
        loop {
            let head = self.atom()?;
            match self.peek() {
                Some(Tok::Eq) => {
                    self.pos += 1;
                    let v = self.atom()?;
                    args.push(Arg::Named(head, v));
                }
                Some(Tok::Open) => {
                    self.pos -= 1;
                    args.push(Arg::Nested(Box::new(self.generator()?)));
                }
                _ => {
                    if is_generator_name(&head) {
                        self.pos -= 1;
                        args.push(Arg::Nested(Box::new(self.generator()?)));
                    } else {
                        args.push(Arg::Value(head));
                    }
                }
            }
            match self.peek() {
                Some(Tok::Comma) => self.pos += 1,
                Some(Tok::Close) => {
                    self.pos += 1;
                    return Ok(args);
                }
                other => return Err(Error::Parse(format!("expected `,` or `)`, found {other:?}"))),
            }
        }
    }

    fn generator(&mut self) -> Result<FractalGenerator> {
        let name = self.atom()?;
        let args = self.args()?;
        build(&name, args)
    }
}

fn is_generator_name(s: &str) -> bool {
    matches!(s, "interval" | "full")
}

struct Fields {
    generator: String,
    named: Vec<(String, String)>,
    positional: Vec<String>,
}

impl Fields {
    fn take(&mut self, keys: &[&str], index: usize) -> Option<String> {
        if let Some(i) = self.named.iter().position(|(k, _)| keys.contains(&k.as_str())) {
            return Some(self.named.remove(i).1);
        }
        self.positional.get(index).cloned()
    }

    fn q(&mut self, keys: &[&str], index: usize) -> Result<Q> {
        let v = self.take(keys, index).ok_or_else(|| {
            Error::Parse(format!("{}: missing argument `{}`", self.generator, keys[0]))
        })?;
        parse_q(&v)
    }

    fn q_or(&mut self, keys: &[&str], index: usize, default: Q) -> Result<Q> {
        match self.take(keys, index) {
            Some(v) => parse_q(&v),
            None => Ok(default),
        }
    }

    fn count(&mut self, keys: &[&str], index: usize) -> Result<u32> {
        let v = self.take(keys, index).ok_or_else(|| {
            Error::Parse(format!("{}: missing argument `{}`", self.generator, keys[0]))
        })?;
        v.parse()
            .map_err(|_| Error::Parse(format!("{}: `{}` is not a count", self.generator, v)))
    }

    fn finish(self) -> Result<()> {
        match self.named.first() {
            Some((k, _)) => Err(Error::Parse(format!("{}: unknown argument `{k}`", self.generator))),
            None => Ok(()),
        }
    }
}

fn build(name: &str, args: Vec<Arg>) -> Result<FractalGenerator> {
    if name == "union" {
        let parts = args
            .into_iter()
            .map(|a| match a {
                Arg::Nested(g) => Ok(*g),
                Arg::Value(v) | Arg::Named(_, v) => {
                    Err(Error::Parse(format!("union expects set expressions, found `{v}`")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(FractalGenerator::Union(parts));
    }
    let mut f = Fields { generator: name.to_string(), named: Vec::new(), positional: Vec::new() };
    for a in args {
        match a {
            Arg::Named(k, v) => f.named.push((k, v)),
            Arg::Value(v) => f.positional.push(v),
            Arg::Nested(g) => {
                return Err(Error::Parse(format!("{name}: unexpected nested set `{g}`")))
            }
        }
    }
    let g = match name {
        "interval" | "full" => FractalGenerator::FullInterval,
        "points" => {
            let pts = f.positional.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?;
            f.positional.clear();
            FractalGenerator::FinitePoints(pts)
        }
        "cantor" => FractalGenerator::MiddleCantor {
            alpha: f.q(&["alpha"], 0)?,
            depth: f.count(&["depth", "k"], 1)?,
        },
        "geometric" => FractalGenerator::GeometricSequence {
            base: f.q(&["base", "b"], 0)?,
            count: f.count(&["m", "count"], 1)?,
        },
        "power" => FractalGenerator::PowerSequence {
            exponent: f.q(&["a", "exponent"], 0)?,
            count: f.count(&["m", "count"], 1)?,
        },
        "progression" => {
            let start = f.q(&["u", "start"], 0)?;
            let step = f.q(&["delta", "step"], 1)?;
            let count = f.count(&["m", "count"], 2)?;
            let lo = f.q_or(&["lo"], 3, qi(1))?;
            let hi = f.q_or(&["hi"], 4, qi(2))?;
            FractalGenerator::ArithmeticProgression { start, step, count, window: (lo, hi) }
        }
        other => return Err(Error::Parse(format!("unknown set generator `{other}`"))),
    };
    f.finish()?;
    Ok(g)
}
