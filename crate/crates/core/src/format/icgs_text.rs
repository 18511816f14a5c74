//! Line-oriented text format for iCGS.
//!
//! ```text
//! agents: a e
//! actions a: L R
//! actions e: l r
//! states: q0 q1 q2
//! initial: q0
//! props: win
//! labels q1: win
//! indist a: {q0 q1} {q2}  # blocks; `indist a: q0 ~ q1` adds a pair
//! protocol q0 a: L        # omitted means every action
//! trans q0 (L, l) -> q1   # joint action in agent-name order
//! ```

use std::fmt::Write;

use super::lex::{lex, Cursor, Tok};
use crate::error::Result;
use crate::model::{ActionId, Icgs, IcgsBuilder};

pub fn parse_icgs(text: &str) -> Result<Icgs> {
    let mut c = Cursor::new(lex(text, true)?, text);
    let mut b = IcgsBuilder::default();
    let mut agents: Vec<(String, Option<Vec<String>>)> = Vec::new();
    loop {
        c.eat_newlines();
        if c.at_end() {
            break;
        }
        let kw = c.ident("a declaration")?;
        match kw.as_str() {
            "agents" => {
                c.expect(":")?;
                for a in names(&mut c)? {
                    if agents.iter().any(|(n, _)| *n == a) {
                        return Err(c.error(format!("agent `{a}` declared twice")));
                    }
                    agents.push((a, None));
                }
            }
            "actions" => {
                let name = c.ident("an agent name")?;
                let entry = match agents.iter_mut().find(|(n, _)| *n == name) {
                    Some((_, acts)) => acts,
                    None => return Err(c.error(format!("actions for undeclared agent `{name}`"))),
                };
                c.expect(":")?;
                entry.get_or_insert_with(Vec::new).extend(names(&mut c)?);
            }
            "states" => {
                c.expect(":")?;
                b.states(names(&mut c)?);
            }
            "initial" => {
                c.expect(":")?;
                for s in names(&mut c)? {
                    b.initial(&s);
                }
            }
            "props" => {
                c.expect(":")?;
                b.declare_props(names(&mut c)?);
            }
            "labels" => {
                let s = c.ident("a state")?;
                c.expect(":")?;
                for p in names(&mut c)? {
                    b.label(&s, &p);
                }
            }
            "protocol" => {
                let s = c.ident("a state")?;
                let a = c.ident("an agent")?;
                c.expect(":")?;
                b.protocol(&s, &a, names(&mut c)?);
            }
            "indist" => {
                let a = c.ident("an agent")?;
                c.expect(":")?;
                if matches!(c.peek(), Some(Tok::Ident(_))) {
                    let s = c.ident("a state")?;
                    c.expect("~")?;
                    let t = c.ident("a state")?;
                    b.indist_pair(&a, &s, &t);
                } else {
                    while c.eat("{") {
                        let mut block = Vec::new();
                        while !c.eat("}") {
                            block.push(c.ident("a state or `}`")?);
                        }
                        b.indist_block(&a, block);
                    }
                }
            }
            "trans" => {
                let s = c.ident("a state")?;
                c.expect("(")?;
                let mut joint = vec![c.ident("an action")?];
                while c.eat(",") {
                    joint.push(c.ident("an action")?);
                }
                c.expect(")")?;
                c.expect("->")?;
                let t = c.ident("a state")?;
                b.transition(&s, joint, &t);
            }
            other => return Err(c.error(format!("unknown declaration `{other}`"))),
        }
        if !c.at_end() && c.peek() != Some(&Tok::Newline) {
            return Err(c.error(format!("expected end of line, found {}", c.describe())));
        }
    }
    for (name, acts) in agents {
        b.agent(&name, acts.unwrap_or_default());
    }
    b.build()
}

fn names(c: &mut Cursor) -> Result<Vec<String>> {
    let mut out = Vec::new();
    while let Some(Tok::Ident(_)) = c.peek() {
        out.push(c.ident("a name")?);
    }
    Ok(out)
}

pub fn print_icgs(m: &Icgs) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "agents: {}", m.agent_names().join(" "));
    for a in m.agents() {
        let _ = writeln!(out, "actions {}: {}", m.agent_name(a), m.actions(a).join(" "));
    }
    let _ = writeln!(out, "states: {}", m.state_names().join(" "));
    let init: Vec<&str> = m.initial().iter().map(|&s| m.state_name(s)).collect();
    let _ = writeln!(out, "initial: {}", init.join(" "));
    let _ = writeln!(out, "props: {}", m.props().join(" "));
    for s in m.states() {
        if !m.labels(s).is_empty() {
            let ps: Vec<&str> = m.labels(s).iter().map(|p| m.props()[p.index()].as_str()).collect();
            let _ = writeln!(out, "labels {}: {}", m.state_name(s), ps.join(" "));
        }
    }
    for a in m.agents() {
        let blocks: Vec<String> = m
            .indist(a)
            .iter()
            .map(|b| {
                let ss: Vec<&str> = b.iter().map(|&s| m.state_name(s)).collect();
                format!("{{{}}}", ss.join(" "))
            })
            .collect();
        let _ = writeln!(out, "indist {}: {}", m.agent_name(a), blocks.join(" "));
    }
    for s in m.states() {
        for a in m.agents() {
            let p = m.protocol(s, a);
            if p.len() != m.actions(a).len() {
                let acts: Vec<&str> = p.iter().map(|&x| m.action_name(a, x)).collect();
                let _ = writeln!(out, "protocol {} {}: {}", m.state_name(s), m.agent_name(a), acts.join(" "));
            }
        }
    }
    for s in m.states() {
        for (joint, t) in m.transitions(s) {
            let acts: Vec<&str> = joint
                .iter()
                .enumerate()
                .map(|(a, &x): (usize, &ActionId)| m.action_name(crate::model::AgentId(a), x))
                .collect();
            let _ = writeln!(out, "trans {} ({}) -> {}", m.state_name(s), acts.join(", "), m.state_name(t));
        }
    }
    out
}
