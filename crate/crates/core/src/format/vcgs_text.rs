//! Text format for vCGS.
//!
//! ```text
//! props: p;
//! agent a {
//!   atoms: x;
//!   init start: T ~> x := F, vis(x, b) := T;
//!   update flip: !x ~> x := T;
//! }
//! environment env {
//!   atoms: turn;
//!   update tick: T ~> p := T;
//! }
//! ```
//!
//! Guards use `!`, `&`, `|`, parentheses and the constants `T`, `F`.
//! Command names are optional; unnamed commands are numbered per agent
//! (`init0`, `update1`, ...).

use std::fmt::Write;

use super::lex::{lex, Cursor, Tok};
use crate::error::Result;
use crate::vcgs::{AgentSpec, Assignment, CommandKind, Guard, GuardedCommand, Vcgs};

pub fn parse_vcgs(text: &str) -> Result<Vcgs> {
    let mut c = Cursor::new(lex(text, false)?, text);
    let mut v = Vcgs::default();
    while !c.at_end() {
        if c.keyword("props") {
            c.expect(":")?;
            v.props.extend(atom_list(&mut c)?);
            c.expect(";")?;
            continue;
        }
        let environment = if c.keyword("environment") {
            true
        } else if c.keyword("agent") {
            false
        } else {
            return Err(c.error(format!("expected `props`, `agent` or `environment`, found {}", c.describe())));
        };
        let name = c.ident("an agent name")?;
        c.expect("{")?;
        let mut spec = AgentSpec { name, environment, atoms: vec![], commands: vec![] };
        while !c.eat("}") {
            if c.keyword("atoms") {
                c.expect(":")?;
                spec.atoms.extend(atom_list(&mut c)?);
                c.expect(";")?;
                continue;
            }
            let kind = if c.keyword("init") {
                CommandKind::Init
            } else if c.keyword("update") {
                CommandKind::Update
            } else {
                return Err(c.error(format!("expected `atoms`, `init`, `update` or `}}`, found {}", c.describe())));
            };
            let name = if c.eat(":") {
                let prefix = if kind == CommandKind::Init { "init" } else { "update" };
                format!("{prefix}{}", spec.commands.iter().filter(|x| x.kind == kind).count())
            } else {
                let name = c.ident("a command name")?;
                c.expect(":")?;
                name
            };
            let guard = or(&mut c)?;
            c.expect("~>")?;
            let mut assignments = Vec::new();
            if !c.eat(";") {
                loop {
                    assignments.push(assignment(&mut c)?);
                    if c.eat(";") {
                        break;
                    }
                    c.expect(",")?;
                }
            }
            spec.commands.push(GuardedCommand { name, kind, guard, assignments });
        }
        v.agents.push(spec);
    }
    Ok(v)
}

fn atom_list(c: &mut Cursor) -> Result<Vec<String>> {
    let mut out = Vec::new();
    while let Some(Tok::Ident(s)) = c.peek() {
        if s == "T" || s == "F" {
            return Err(c.error(format!("`{s}` is reserved for the truth constants")));
        }
        out.push(c.ident("an atom")?);
    }
    Ok(out)
}

fn or(c: &mut Cursor) -> Result<Guard> {
    let mut parts = vec![and(c)?];
    while c.eat("|") {
        parts.push(and(c)?);
    }
    Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Guard::Or(parts) })
}

fn and(c: &mut Cursor) -> Result<Guard> {
    let mut parts = vec![unary(c)?];
    while c.eat("&") {
        parts.push(unary(c)?);
    }
    Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Guard::And(parts) })
}

fn unary(c: &mut Cursor) -> Result<Guard> {
    if c.eat("!") {
        return Ok(Guard::Not(Box::new(unary(c)?)));
    }
    if c.eat("(") {
        let g = or(c)?;
        c.expect(")")?;
        return Ok(g);
    }
    let name = c.ident("a guard")?;
    Ok(match name.as_str() {
        "T" => Guard::Const(true),
        "F" => Guard::Const(false),
        _ => Guard::Atom(name),
    })
}

fn truth(c: &mut Cursor) -> Result<bool> {
    match c.ident("`T` or `F`")?.as_str() {
        "T" => Ok(true),
        "F" => Ok(false),
        other => Err(c.error(format!("expected `T` or `F`, found `{other}`"))),
    }
}

fn assignment(c: &mut Cursor) -> Result<Assignment> {
    if c.keyword("vis") {
        c.expect("(")?;
        let atom = c.ident("an atom")?;
        c.expect(",")?;
        let observer = c.ident("an agent")?;
        c.expect(")")?;
        c.expect(":=")?;
        return Ok(Assignment::vis(atom, observer, truth(c)?));
    }
    let atom = c.ident("an atom or `vis`")?;
    c.expect(":=")?;
    Ok(Assignment::value(atom, truth(c)?))
}

pub fn print_vcgs(v: &Vcgs) -> String {
    let mut out = String::new();
    if !v.props.is_empty() {
        let _ = writeln!(out, "props: {};", v.props.join(" "));
    }
    for spec in &v.agents {
        let kw = if spec.environment { "environment" } else { "agent" };
        let _ = writeln!(out, "{kw} {} {{", spec.name);
        if !spec.atoms.is_empty() {
            let _ = writeln!(out, "  atoms: {};", spec.atoms.join(" "));
        }
        for cmd in &spec.commands {
            let kind = match cmd.kind {
                CommandKind::Init => "init",
                CommandKind::Update => "update",
            };
            let asg: Vec<String> = cmd.assignments.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "  {kind} {}: {} ~> {};", cmd.name, cmd.guard, asg.join(", "));
        }
        let _ = writeln!(out, "}}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    const SRC: &str = "
props: p;
agent a {
  atoms: x y;
  init i: T ~> x := F, vis(x, env) := T;
  update u: !x & (y | !(x & y)) ~> x := T;
  update idle: F ~> ;
  update: y ~> y := F;
}
environment env {
  atoms: t;
  update go: x ~> p := T, t := F;
}
";

    #[test]
    fn parse_shape() {
        let v = parse_vcgs(SRC).unwrap();
        assert_eq!(v.props, ["p"]);
        assert_eq!(v.agents.len(), 2);
        let a = &v.agents[0];
        assert_eq!(a.atoms, ["x", "y"]);
        assert_eq!(a.commands[0].assignments[1], Assignment::vis("x", "env", true));
        assert_eq!(a.commands[1].guard.to_string(), "!x & (y | !(x & y))");
        assert!(a.commands[2].assignments.is_empty());
        assert_eq!(a.commands[3].name, "update2");
        assert!(v.agents[1].environment);
    }

    #[test]
    fn round_trip() {
        let v = parse_vcgs(SRC).unwrap();
        let text = print_vcgs(&v);
        assert_eq!(parse_vcgs(&text).unwrap(), v);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_vcgs("agent a {\n  atoms: x;\n  init i: x ~> x := maybe;\n}") {
            Err(Error::Syntax { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_vcgs("agent a { atoms: T; }"), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(parse_vcgs("agent a {"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_vcgs("agent a { init i: x ~> x = T; }"), Err(Error::Syntax { .. })));
    }
}
