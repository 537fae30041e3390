use crate::algebra::{check_ai_semiring, FinAlgebra};
use crate::report::Report;
use crate::terms::{schema, satisfies_all, EvalError, Identity};
use std::fmt;
use std::str::FromStr;

/// The three varieties of ai-semirings parametrised by `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Class {
    /// x = x^(n+1)
    Sr,
    /// Sr_n plus x^n + y^n = x^n*y^n
    M,
    /// Sr_n plus centrality of n-th powers and x + y = x*(x + y)^n
    N,
}

impl Class {
    pub fn identities(self, n: u64) -> Vec<Identity> {
        let keys: &[&str] = match self {
            Class::Sr => &["srn"],
            Class::M => &["srn", "mn"],
            Class::N => &["srn", "center", "natordern"],
        };
        keys.iter().flat_map(|k| schema(k).expect("builtin").identities(n)).collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            Class::Sr => "Sr_n",
            Class::M => "M_n",
            Class::N => "N_n",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Class {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sr" | "srn" | "sr_n" => Ok(Class::Sr),
            "m" | "mn" | "m_n" => Ok(Class::M),
            "n" | "nn" | "n_n" => Ok(Class::N),
            _ => Err(format!("unknown class `{s}` (expected Srn, Mn or Nn)")),
        }
    }
}

/// Membership of an ai-semiring in Sr_n, M_n or N_n.
///
/// Algebras failing the ai-semiring axioms get an `inapplicable` verdict.
pub fn check_in_class(s: &FinAlgebra, class: Class, n: u64, budget: u64) -> Result<Report, EvalError> {
    if n == 0 {
        return Err(EvalError::InvalidN);
    }
    let claim = format!("in-{}", class.name().replace("_n", &format!("_{n}")));
    let ai = check_ai_semiring(s)?;
    if !ai.is_pass() {
        return Ok(Report::inapplicable(claim, format!("not an ai-semiring: {}", ai.detail)));
    }
    satisfies_all(s, &claim, &class.identities(n), n, budget)
}

/// Plain boolean membership; `None` when the budget ran out.
pub fn in_class(s: &FinAlgebra, class: Class, n: u64, budget: u64) -> Result<Option<bool>, EvalError> {
    let r = check_in_class(s, class, n, budget)?;
    Ok(match r.verdict {
        crate::report::Verdict::Pass => Some(true),
        crate::report::Verdict::Unknown => None,
        _ => Some(false),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_algebra, Signature};
    use crate::report::Verdict;
    use crate::terms::DEFAULT_BUDGET;

    fn c2_flat() -> FinAlgebra {
        let add = vec![0, 0, 0, 0, 1, 0, 0, 0, 2];
        let mul = vec![0, 0, 0, 0, 1, 2, 0, 2, 1];
        make_algebra(3, Signature::semiring(), vec![add, mul]).unwrap()
    }

    #[test]
    fn c2_flat_memberships() {
        let s = c2_flat();
        assert_eq!(check_in_class(&s, Class::Sr, 1, DEFAULT_BUDGET).unwrap().verdict, Verdict::Fail);
        for c in [Class::Sr, Class::M, Class::N] {
            assert!(check_in_class(&s, c, 2, DEFAULT_BUDGET).unwrap().is_pass(), "{c}");
        }
        assert_eq!(check_in_class(&s, Class::M, 2, DEFAULT_BUDGET).unwrap().claim, "in-M_2");
    }

    #[test]
    fn non_semiring_is_inapplicable() {
        let g = vec![0, 1, 1, 0];
        let s = make_algebra(2, Signature::semiring(), vec![g.clone(), g]).unwrap();
        assert_eq!(check_in_class(&s, Class::Sr, 2, DEFAULT_BUDGET).unwrap().verdict, Verdict::Inapplicable);
    }

    #[test]
    fn n_zero_rejected() {
        assert_eq!(check_in_class(&c2_flat(), Class::Sr, 0, 10), Err(EvalError::InvalidN));
    }

    #[test]
    fn parse_class() {
        assert_eq!("Mn".parse::<Class>().unwrap(), Class::M);
        assert!("Q".parse::<Class>().is_err());
    }
}
