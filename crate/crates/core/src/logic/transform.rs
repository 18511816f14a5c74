use std::collections::HashSet;

use super::{Dialect, Formula};

/// Slows a formula down to the two-tick macro-step of the reduction.
///
/// ATL*: every `X ψ` becomes `X X ψ'`. ATL: every `<<A>> X φ` becomes
/// `<<A>> X <<A>> X φ'`; `G` and `U` modalities are kept, their operands
/// rewritten. Rewriting is bottom-up, so nested next operators duplicate
/// independently.
pub fn duplicate_next(f: &Formula, dialect: Dialect) -> Formula {
    use Formula::*;
    let rec = |x: &Formula| Box::new(duplicate_next(x, dialect));
    match (f, dialect) {
        (True | False | Atom(_), _) => f.clone(),
        (Not(x), _) => Not(rec(x)),
        (And(l, r), _) => And(rec(l), rec(r)),
        (Or(l, r), _) => Or(rec(l), rec(r)),
        (Next(x), Dialect::AtlStar) => Next(Box::new(Next(rec(x)))),
        (Coalition(c, body), Dialect::Atl) => match &**body {
            Next(x) => {
                let inner = Coalition(c.clone(), Box::new(Next(rec(x))));
                Coalition(c.clone(), Box::new(Next(Box::new(inner))))
            }
            other => Coalition(c.clone(), rec(other)),
        },
        (Coalition(c, body), Dialect::AtlStar) => Coalition(c.clone(), rec(body)),
        (Next(x), Dialect::Atl) => Next(rec(x)),
        (Always(x), _) => Always(rec(x)),
        (Eventually(x), _) => Eventually(rec(x)),
        (Until(l, r), _) => Until(rec(l), rec(r)),
    }
}

/// Distinct subformulas, children before parents.
pub fn subformula_closure(f: &Formula) -> Vec<Formula> {
    fn walk<'a>(f: &'a Formula, seen: &mut HashSet<&'a Formula>, out: &mut Vec<&'a Formula>) {
        if seen.contains(f) {
            return;
        }
        for c in f.children() {
            walk(c, seen, out);
        }
        seen.insert(f);
        out.push(f);
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    walk(f, &mut seen, &mut out);
    out.into_iter().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, parse_path_formula, Coalition};

    fn p(s: &str) -> Formula {
        Formula::atom(s)
    }

    #[test]
    fn next_doubles_in_star() {
        let f = parse_path_formula("X p", Dialect::AtlStar).unwrap();
        assert_eq!(duplicate_next(&f, Dialect::AtlStar), p("p").next().next());
        let f = parse_path_formula("X X p", Dialect::AtlStar).unwrap();
        assert_eq!(duplicate_next(&f, Dialect::AtlStar).to_string(), "X X X X p");
    }

    #[test]
    fn coalition_next_doubles_in_atl() {
        let f = parse_formula("<<A>> X p", Dialect::Atl).unwrap();
        let g = duplicate_next(&f, Dialect::Atl);
        assert_eq!(g.to_string(), "<<A>> X <<A>> X p");
        assert!(g.check_dialect(Dialect::Atl).is_ok());
    }

    #[test]
    fn next_free_formula_is_unchanged() {
        for d in [Dialect::Atl, Dialect::AtlStar] {
            let f = parse_formula("p & <<A>> G q", d).unwrap();
            assert_eq!(duplicate_next(&f, d), f);
        }
    }

    #[test]
    fn nested_rewrite_under_until() {
        let f = parse_formula("<<a>> (<<b>> X p U q)", Dialect::Atl).unwrap();
        assert_eq!(duplicate_next(&f, Dialect::Atl).to_string(), "<<a>> (<<b>> X <<b>> X p U q)");
    }

    #[test]
    fn closure_examples() {
        assert_eq!(subformula_closure(&p("p")), vec![p("p")]);
        let f = parse_formula("<<a>> X p", Dialect::Atl).unwrap();
        assert_eq!(subformula_closure(&f), vec![p("p"), p("p").next(), f.clone()]);
        let f = parse_formula("<<a>> (p U q)", Dialect::Atl).unwrap();
        assert_eq!(
            subformula_closure(&f),
            vec![
                p("p"),
                p("q"),
                p("p").until(p("q")),
                Formula::coalition(Coalition::new(["a"]), p("p").until(p("q")))
            ]
        );
    }

    #[test]
    fn closure_dedups_shared_subtrees() {
        let f = parse_formula("p & p | <<a>> X p", Dialect::Atl).unwrap();
        let c = subformula_closure(&f);
        assert_eq!(c.iter().filter(|g| **g == p("p")).count(), 1);
        assert_eq!(c.last(), Some(&f));
    }
}
