use std::collections::BTreeSet;
use std::fmt;

/// An exponent `coeff * n + offset` in the symbolic parameter `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent {
    pub coeff: u64,
    pub offset: i64,
}

impl Exponent {
    pub const N: Exponent = Exponent { coeff: 1, offset: 0 };

    pub fn constant(k: u64) -> Self {
        Exponent { coeff: 0, offset: k as i64 }
    }

    pub fn affine(coeff: u64, offset: i64) -> Self {
        Exponent { coeff, offset }
    }

    /// Value at a concrete `n`; negative results are clamped to `None`.
    pub fn value(&self, n: u64) -> Option<u64> {
        let v = self.coeff as i128 * n as i128 + self.offset as i128;
        u64::try_from(v).ok()
    }

    /// Smallest value over `n >= 1` (attained at `n = 1`).
    pub fn min_value(&self) -> i128 {
        self.coeff as i128 + self.offset as i128
    }

    pub fn is_constant(&self) -> bool {
        self.coeff == 0
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.coeff, self.offset) {
            (0, b) => write!(f, "{b}"),
            (1, 0) => write!(f, "n"),
            (a, b) => {
                f.write_str("(")?;
                if a != 1 {
                    write!(f, "{a}*")?;
                }
                f.write_str("n")?;
                if b > 0 {
                    write!(f, "+{b}")?;
                } else if b < 0 {
                    write!(f, "-{}", -b)?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Semiring / group terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Pow(Box<Term>, Exponent),
    Inv(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Term, e: Exponent) -> Term {
        Term::Pow(Box::new(a), e)
    }

    pub fn inv(a: Term) -> Term {
        Term::Inv(Box::new(a))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Add(a, b) | Term::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Pow(a, _) | Term::Inv(a) => a.collect_vars(out),
        }
    }

    /// Replaces every symbolic exponent by its value at `n`.
    pub fn instantiate(&self, n: u64) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::Add(a, b) => Term::add(a.instantiate(n), b.instantiate(n)),
            Term::Mul(a, b) => Term::mul(a.instantiate(n), b.instantiate(n)),
            Term::Pow(a, e) => {
                let v = e.value(n).expect("exponents are validated non-negative");
                Term::pow(a.instantiate(n), Exponent::constant(v))
            }
            Term::Inv(a) => Term::inv(a.instantiate(n)),
        }
    }

    fn fmt_level(&self, f: &mut fmt::Formatter<'_>, level: u8) -> fmt::Result {
        // 0 = sum, 1 = product, 2 = atom
        let needed = match self {
            Term::Add(..) => 0,
            Term::Mul(..) => 1,
            Term::Pow(..) => 2,
            Term::Var(_) | Term::Inv(_) => 3,
        };
        let wrap = needed < level;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Term::Var(v) => f.write_str(v)?,
            Term::Add(a, b) => {
                a.fmt_level(f, 0)?;
                f.write_str(" + ")?;
                b.fmt_level(f, 1)?;
            }
            Term::Mul(a, b) => {
                a.fmt_level(f, 1)?;
                f.write_str("*")?;
                b.fmt_level(f, 2)?;
            }
            Term::Pow(a, e) => {
                a.fmt_level(f, 3)?;
                write!(f, "^{e}")?;
            }
            Term::Inv(a) => {
                a.fmt_level(f, 3)?;
                f.write_str("'")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_level(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = self.lhs.vars();
        self.rhs.collect_vars(&mut out);
        out
    }

    pub fn instantiate(&self, n: u64) -> Identity {
        Identity::new(self.lhs.instantiate(n), self.rhs.instantiate(n))
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// `premises -> conclusion`; no premises means a plain identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuasiIdentity {
    pub premises: Vec<Identity>,
    pub conclusion: Identity,
}

impl QuasiIdentity {
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = self.conclusion.vars();
        for p in &self.premises {
            out.extend(p.vars());
        }
        out
    }

    pub fn instantiate(&self, n: u64) -> QuasiIdentity {
        QuasiIdentity {
            premises: self.premises.iter().map(|p| p.instantiate(n)).collect(),
            conclusion: self.conclusion.instantiate(n),
        }
    }
}

impl From<Identity> for QuasiIdentity {
    fn from(conclusion: Identity) -> Self {
        QuasiIdentity { premises: Vec::new(), conclusion }
    }
}

impl fmt::Display for QuasiIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{p}")?;
        }
        if !self.premises.is_empty() {
            f.write_str(" -> ")?;
        }
        write!(f, "{}", self.conclusion)
    }
}
