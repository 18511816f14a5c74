use std::fmt;

use super::{Coalition, Formula};

const OR: u8 = 1;
const AND: u8 = 2;
const UNTIL: u8 = 3;
const UNARY: u8 = 4;
const ATOM: u8 = 5;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Until(..) => UNTIL,
        Formula::Not(_)
        | Formula::Coalition(..)
        | Formula::Next(_)
        | Formula::Always(_)
        | Formula::Eventually(_) => UNARY,
        Formula::True | Formula::False | Formula::Atom(_) => ATOM,
    }
}

fn child(f: &mut fmt::Formatter<'_>, c: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({c})")
    } else {
        write!(f, "{c}")
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<<{}>>", self.agents().collect::<Vec<_>>().join(","))
    }
}

/// Prints with the fewest parentheses that parse back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::Not(x) => {
                write!(f, "!")?;
                child(f, x, prec(x) < UNARY)
            }
            Formula::Coalition(c, x) => {
                write!(f, "{c} ")?;
                child(f, x, prec(x) < UNARY)
            }
            Formula::Next(x) | Formula::Always(x) | Formula::Eventually(x) => {
                let op = match self {
                    Formula::Next(_) => "X",
                    Formula::Always(_) => "G",
                    _ => "F",
                };
                write!(f, "{op} ")?;
                child(f, x, prec(x) < UNARY)
            }
            Formula::And(l, r) | Formula::Or(l, r) => {
                let (me, op) = if matches!(self, Formula::And(..)) { (AND, "&") } else { (OR, "|") };
                child(f, l, prec(l) < me)?;
                write!(f, " {op} ")?;
                child(f, r, prec(r) <= me)
            }
            Formula::Until(l, r) => {
                child(f, l, prec(l) <= UNTIL)?;
                write!(f, " U ")?;
                child(f, r, prec(r) < UNTIL)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::logic::{parse_formula, Dialect, Formula};

    #[test]
    fn atom_prints_bare() {
        assert_eq!(Formula::atom("p").to_string(), "p");
    }

    #[test]
    fn duplicated_coalition_next() {
        let f = parse_formula("<<A>> X (<<A>> X (p))", Dialect::Atl).unwrap();
        assert_eq!(f.to_string(), "<<A>> X <<A>> X p");
    }

    #[test]
    fn minimal_parentheses() {
        let cases = [
            "(p & q) & r",
            "p & (q & r)",
            "(p U q) U r",
            "<<a>> ((p | q) U (r & s))",
            "!(p & q) | !p",
            "<<a,b>> G !<<>> X false",
        ];
        let printed = [
            "p & q & r",
            "p & (q & r)",
            "(p U q) U r",
            "<<a>> ((p | q) U (r & s))",
            "!(p & q) | !p",
            "<<a,b>> G !<<>> X false",
        ];
        for (src, want) in cases.iter().zip(printed) {
            let f = parse_formula(src, Dialect::AtlStar)
                .or_else(|_| crate::logic::parse_path_formula(src, Dialect::AtlStar))
                .unwrap();
            assert_eq!(f.to_string(), want, "{src}");
        }
    }
}
