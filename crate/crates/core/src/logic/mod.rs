//! ATL and ATL* syntax.
//!
//! A single [`Formula`] tree carries both layers. State formulas are
//! constants, atoms, boolean combinations of state formulas and coalition
//! modalities; the temporal operators `X`, `G`, `F`, `U` only occur below a
//! coalition (ATL*), and in the ATL dialect a coalition body is exactly one
//! of `X φ`, `G φ`, `φ U ψ` over state formulas.

mod parse;
mod print;
mod transform;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use parse::{parse_formula, parse_path_formula};
pub use transform::{duplicate_next, subformula_closure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dialect {
    #[serde(rename = "ATL")]
    Atl,
    #[serde(rename = "ATL*")]
    AtlStar,
}

impl std::str::FromStr for Dialect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "atl" => Ok(Dialect::Atl),
            "atl*" | "atlstar" | "atl-star" => Ok(Dialect::AtlStar),
            _ => Err(Error::Input(format!("unknown dialect `{s}` (expected ATL or ATL*)"))),
        }
    }
}

/// A set of agent names, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition(BTreeSet<String>);

impl Coalition {
    pub fn empty() -> Self {
        Coalition::default()
    }

    pub fn new<I, S>(agents: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Coalition(agents.into_iter().map(Into::into).collect())
    }

    pub fn agents(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn contains(&self, agent: &str) -> bool {
        self.0.contains(agent)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Coalition(Coalition, Box<Formula>),
    Next(Box<Formula>),
    Always(Box<Formula>),
    Eventually(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_owned())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn next(self) -> Formula {
        Formula::Next(Box::new(self))
    }

    pub fn always(self) -> Formula {
        Formula::Always(Box::new(self))
    }

    pub fn eventually(self) -> Formula {
        Formula::Eventually(Box::new(self))
    }

    pub fn until(self, rhs: Formula) -> Formula {
        Formula::Until(Box::new(self), Box::new(rhs))
    }

    pub fn coalition(agents: Coalition, body: Formula) -> Formula {
        Formula::Coalition(agents, Box::new(body))
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => vec![],
            Formula::Not(f)
            | Formula::Coalition(_, f)
            | Formula::Next(f)
            | Formula::Always(f)
            | Formula::Eventually(f) => vec![f],
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Until(l, r) => vec![l, r],
        }
    }

    pub fn is_temporal(&self) -> bool {
        matches!(
            self,
            Formula::Next(_) | Formula::Always(_) | Formula::Eventually(_) | Formula::Until(..)
        )
    }

    /// No temporal operator outside the scope of a coalition.
    pub fn is_state_formula(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::Coalition(..) => true,
            Formula::Not(f) => f.is_state_formula(),
            Formula::And(l, r) | Formula::Or(l, r) => l.is_state_formula() && r.is_state_formula(),
            _ => false,
        }
    }

    /// Number of nodes satisfying `pred`, counting repeated subtrees.
    pub fn count(&self, pred: &impl Fn(&Formula) -> bool) -> usize {
        usize::from(pred(self)) + self.children().iter().map(|c| c.count(pred)).sum::<usize>()
    }

    /// Number of `X` nodes.
    pub fn count_next(&self) -> usize {
        self.count(&|f| matches!(f, Formula::Next(_)))
    }

    /// Number of `<<A>> X φ` nodes.
    pub fn count_coalition_next(&self) -> usize {
        self.count(&|f| matches!(f, Formula::Coalition(_, b) if matches!(**b, Formula::Next(_))))
    }

    /// Nesting depth of temporal operators.
    pub fn temporal_depth(&self) -> usize {
        let below = self.children().iter().map(|c| c.temporal_depth()).max().unwrap_or(0);
        below + usize::from(self.is_temporal())
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        if let Formula::Atom(p) = self {
            out.insert(p);
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// Coalitions occurring in the formula, outermost first.
    pub fn coalitions(&self) -> Vec<&Coalition> {
        let mut out = Vec::new();
        self.collect_coalitions(&mut out);
        out
    }

    fn collect_coalitions<'a>(&'a self, out: &mut Vec<&'a Coalition>) {
        if let Formula::Coalition(c, _) = self {
            out.push(c);
        }
        for c in self.children() {
            c.collect_coalitions(out);
        }
    }

    /// Whether `self` is a well-formed state formula of `dialect`.
    pub fn check_dialect(&self, dialect: Dialect) -> Result<()> {
        if !self.is_state_formula() {
            return Err(Error::Dialect(format!(
                "`{self}` has a temporal operator outside any coalition"
            )));
        }
        self.check_state(dialect)
    }

    fn check_state(&self, dialect: Dialect) -> Result<()> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => Ok(()),
            Formula::Not(f) => f.check_state(dialect),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.check_state(dialect)?;
                r.check_state(dialect)
            }
            Formula::Coalition(_, body) => match dialect {
                Dialect::AtlStar => body.check_path_star(),
                Dialect::Atl => match &**body {
                    Formula::Next(f) | Formula::Always(f) => f.check_atl_operand(),
                    Formula::Until(l, r) => {
                        l.check_atl_operand()?;
                        r.check_atl_operand()
                    }
                    Formula::Eventually(_) => Err(Error::Dialect(
                        "`F` must be desugared to `true U` in ATL".into(),
                    )),
                    other => Err(Error::Dialect(format!(
                        "coalition body `{other}` is not one of X, G, U in ATL"
                    ))),
                },
            },
            t => Err(Error::Dialect(format!("`{t}` is not a state formula"))),
        }
    }

    fn check_atl_operand(&self) -> Result<()> {
        if self.is_state_formula() {
            self.check_state(Dialect::Atl)
        } else {
            Err(Error::Dialect(format!(
                "`{self}` nests temporal operators without a coalition in ATL"
            )))
        }
    }

    fn check_path_star(&self) -> Result<()> {
        match self {
            Formula::Coalition(..) => self.check_state(Dialect::AtlStar),
            _ => self
                .children()
                .into_iter()
                .try_for_each(|c| c.check_path_star()),
        }
    }

    /// Whether `self` is a path formula of `dialect`, i.e. anything that
    /// may appear as the body of a coalition (or a state formula).
    pub fn check_path_dialect(&self, dialect: Dialect) -> Result<()> {
        match dialect {
            Dialect::AtlStar => self.check_path_star(),
            Dialect::Atl => {
                if self.is_state_formula() {
                    return self.check_state(Dialect::Atl);
                }
                Formula::coalition(Coalition::empty(), self.clone())
                    .check_state(Dialect::Atl)
                    .map_err(|e| match e {
                        Error::Dialect(m) => Error::Dialect(m.replace("coalition body", "path formula")),
                        e => e,
                    })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dialect_membership() {
        let p = Formula::atom("p");
        let a = Coalition::new(["a"]);
        let atl = Formula::coalition(a.clone(), p.clone().next());
        assert!(atl.check_dialect(Dialect::Atl).is_ok());
        assert!(atl.check_dialect(Dialect::AtlStar).is_ok());

        let star = Formula::coalition(a.clone(), p.clone().next().next());
        assert!(matches!(star.check_dialect(Dialect::Atl), Err(Error::Dialect(_))));
        assert!(star.check_dialect(Dialect::AtlStar).is_ok());

        let bare = p.clone().next();
        assert!(matches!(bare.check_dialect(Dialect::AtlStar), Err(Error::Dialect(_))));

        let nested = Formula::coalition(
            a.clone(),
            Formula::coalition(a, p.clone().next()).always(),
        );
        assert!(nested.check_dialect(Dialect::Atl).is_ok());
    }

    #[test]
    fn counts() {
        let p = Formula::atom("p");
        let f = Formula::coalition(Coalition::new(["a"]), p.clone().next().next()).and(p);
        assert_eq!(f.count_next(), 2);
        assert_eq!(f.count_coalition_next(), 1);
        assert_eq!(f.temporal_depth(), 2);
    }
}
