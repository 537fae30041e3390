//! Named identity schemas in the symbolic exponent `n`.

use super::ast::Identity;
use super::parse::{parse_identity, Dialect};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemaError {
    #[error("unknown schema key `{0}`")]
    UnknownKey(String),
}

enum Template {
    /// Text in the symbolic parameter `n`.
    Symbolic(&'static [&'static str]),
    /// Text that needs a concrete `n` (non-affine exponents, n-term sums).
    PerN(fn(u64) -> Vec<String>),
}

pub struct Schema {
    pub key: &'static str,
    pub description: &'static str,
    pub dialect: Dialect,
    template: Template,
}

impl Schema {
    /// The schema with `n` left symbolic, when expressible.
    pub fn symbolic(&self) -> Option<Vec<Identity>> {
        match &self.template {
            Template::Symbolic(texts) => Some(texts.iter().map(|t| self.parse(t)).collect()),
            Template::PerN(_) => None,
        }
    }

    /// The schema with `n` substituted.
    pub fn identities(&self, n: u64) -> Vec<Identity> {
        match &self.template {
            Template::Symbolic(texts) => texts.iter().map(|t| self.parse(t).instantiate(n)).collect(),
            Template::PerN(f) => f(n).iter().map(|t| self.parse(t)).collect(),
        }
    }

    pub fn texts(&self, n: u64) -> Vec<String> {
        self.identities(n).iter().map(ToString::to_string).collect()
    }

    fn parse(&self, text: &str) -> Identity {
        parse_identity(text, self.dialect).unwrap_or_else(|e| panic!("builtin schema {} does not parse: {e}", self.key))
    }
}

fn m_expansion(n: u64) -> Vec<String> {
    let sum: Vec<String> = (1..=n).map(|i| if i == 1 { "x".to_string() } else { format!("x^{i}") }).collect();
    vec![format!("x + x^{n} = {}", sum.join(" + "))]
}

fn power_step(n: u64) -> Vec<String> {
    let k = n * (n - 1) + 1;
    vec![format!("(x*y^{})^{n}*y = x^{n}*y^{k}", n - 1), format!("x^{n}*y^{k} = x^{n}*y")]
}

fn chain_e(_n: u64) -> Vec<String> {
    let e = "(y*x^(n-1) + (y*x^(n-1))^n)";
    vec![
        format!("x + y = {e}*x"),
        format!("{e}*(x + y) = {e}*{e}*x"),
        format!("{e}*{e}*x = {e}*x"),
        format!("x + y = x*{e}"),
    ]
}

const SCHEMAS: &[Schema] = &[
    Schema {
        key: "srn",
        description: "defining identity of Sr_n",
        dialect: Dialect::Semiring,
        template: Template::Symbolic(&["x = x^(n+1)"]),
    },
    Schema {
        key: "powhom",
        description: "x -> x^n is multiplicative",
        dialect: Dialect::Semiring,
        template: Template::Symbolic(&["(x*y)^n = x^n*y^n"]),
    },
    Schema {
        key: "mop",
        description: "M(x) = xM(x) = M(x)x = M(x)^2 with M(x) = x + x^n",
        dialect: Dialect::Semiring,
        template: Template::Symbolic(&["x + x^n = x*(x + x^n)", "x + x^n = (x + x^n)*x", "x + x^n = (x + x^n)^2"]),
    },
    Schema {
        key: "mexpand",
        description: "M(x) = x + x^2 + ... + x^n",
        dialect: Dialect::Semiring,
        template: Template::PerN(m_expansion),
    },
    Schema {
        key: "mn",
        description: "defining identity of M_n within Sr_n",
        dialect: Dialect::Semiring,
        template: Template::Symbolic(&["x^n + y^n = x^n*y^n"]),
    },
    Schema {
        key: "dupl",
        description: "duplicated semilattice: addition equals multiplication",
        dialect: Dialect::Semiring,
        template: Template::Symbolic(&["x + y = x*y"]),
    },
    Schema {
        key: "center",
        description: "n-th powers are central",
        dialect: Dialect::Semiring,
        template: Template::Symbolic(&["x*y^n = y^n*x"]),
    },
    Schema {
        key: "summing",
        description: "addition through M and multiplication",
        dialect: Dialect::Semiring,
        template: Template::Symbolic(&["x + y = (x*y^(n-1) + (x*y^(n-1))^n)*y"]),
    },
    Schema {
        key: "new1",
        description: "x + y = xy^n + x^ny",
        dialect: Dialect::Semiring,
        template: Template::Symbolic(&["x + y = x*y^n + x^n*y"]),
    },
    Schema {
        key: "powstep",
        description: "exponent n(n-1)+1 collapse used for the summing identity",
        dialect: Dialect::Semiring,
        template: Template::PerN(power_step),
    },
    Schema {
        key: "natordern",
        description: "x + y = x(x + y)^n",
        dialect: Dialect::Semiring,
        template: Template::Symbolic(&["x + y = x*(x + y)^n"]),
    },
    Schema {
        key: "natorder-clifford",
        description: "meet is the natural-order infimum, with + as meet and Clifford inverse",
        dialect: Dialect::Clifford,
        template: Template::Symbolic(&["x + y = x*(x + y)'*(x + y)"]),
    },
    Schema {
        key: "gn",
        description: "groups of exponent dividing n",
        dialect: Dialect::Group,
        template: Template::Symbolic(&["x^n*y = y", "y*x^n = y"]),
    },
    Schema {
        key: "chain-half",
        description: "x^n + y^n absorbs x^n and y^n on the left",
        dialect: Dialect::Semiring,
        template: Template::Symbolic(&["x^n + y^n = x^n*(x^n + y^n)", "x^n + y^n = y^n*(x^n + y^n)"]),
    },
    Schema {
        key: "chain-product",
        description: "expansion of (x^n + y^n)^2 as a product of the two halves",
        dialect: Dialect::Semiring,
        template: Template::Symbolic(&[
            "(x^n + y^n)^2 = x^n*(x^n + y^n)*y^n*(x^n + y^n)",
            "x^n*(x^n + y^n)*y^n*(x^n + y^n) = (x^n)^2*y^n*x^n + (x^n)^2*(y^n)^2 + x^n*(y^n)^2*x^n + x^n*(y^n)^3",
        ]),
    },
    Schema {
        key: "chain-e",
        description: "e = M(yx^(n-1)) satisfies x + y = ex = xe and e(x + y) = e^2x = ex",
        dialect: Dialect::Semiring,
        template: Template::PerN(chain_e),
    },
];

pub fn builtin_schemas() -> &'static [Schema] {
    SCHEMAS
}

pub fn schema(key: &str) -> Result<&'static Schema, SchemaError> {
    SCHEMAS.iter().find(|s| s.key == key).ok_or_else(|| SchemaError::UnknownKey(key.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_schema_parses_for_small_n() {
        for s in builtin_schemas() {
            for n in 1..=6 {
                assert!(!s.identities(n).is_empty(), "{}", s.key);
            }
        }
    }

    #[test]
    fn center_text() {
        let s = schema("center").unwrap();
        assert_eq!(s.symbolic().unwrap()[0], parse_identity("x*y^n = y^n*x", Dialect::Semiring).unwrap());
        assert_eq!(s.symbolic().unwrap()[0].to_string(), "x*y^n = y^n*x");
    }

    #[test]
    fn summing_text() {
        let s = schema("summing").unwrap();
        let want = parse_identity("x+y = (x*y^(n-1) + (x*y^(n-1))^n) * y", Dialect::Semiring).unwrap();
        assert_eq!(s.symbolic().unwrap()[0], want);
    }

    #[test]
    fn srn_at_one() {
        assert_eq!(schema("srn").unwrap().texts(1), vec!["x = x^2".to_string()]);
    }

    #[test]
    fn unknown_key() {
        assert_eq!(schema("nope").err(), Some(SchemaError::UnknownKey("nope".into())));
    }

    #[test]
    fn m_expansion_shape() {
        assert_eq!(m_expansion(3), vec!["x + x^3 = x + x^2 + x^3".to_string()]);
        assert_eq!(schema("mexpand").unwrap().texts(1), vec!["x + x^1 = x".to_string()]);
    }
}
