//! Line-oriented proof scripts.
//!
//! Each line has the form `n: <sequent> ; <rule>[params] <premise-lines>`.
//! Sequents use the formula grammar with `,` separating multiset members and
//! `=>` for the sequent arrow. Axiom leaves are written `axiom:<schema-id>`.
//! Lines starting with `#` are comments. The last line is the root.

use crate::kernel::{AxiomId, Derivation, Rule, Sequent};
use crate::ordinals::Ordinal;
use crate::syntax::{Formula, Lang, SyntaxError, Term};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ScriptError {
    #[error("line {line}: {msg}")]
    Malformed { line: u32, msg: String },
    #[error("line {line}: {source}")]
    Syntax {
        line: u32,
        #[source]
        source: SyntaxError,
    },
    #[error("line {line}: unknown rule '{name}'")]
    UnknownRule { line: u32, name: String },
    #[error("line {line}: reference to undefined line {referenced}")]
    BadReference { line: u32, referenced: u32 },
    #[error("empty script")]
    Empty,
}

/// Splits on top-level commas (commas inside parentheses belong to argument
/// lists).
fn split_top_level(text: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(current.trim().to_string());
            current = String::new();
        } else {
            current.push(c);
        }
    }
    out.push(current.trim().to_string());
    out
}

fn parse_sequent(text: &str, lang: Lang, line: u32) -> Result<Sequent, ScriptError> {
    let (l, r) = text.split_once("=>").ok_or_else(|| ScriptError::Malformed {
        line,
        msg: "sequent needs '=>'".into(),
    })?;
    let parse_side = |side: &str| -> Result<Vec<Formula>, ScriptError> {
        let side = side.trim();
        if side.is_empty() {
            return Ok(Vec::new());
        }
        split_top_level(side, ',')
            .iter()
            .map(|s| Formula::parse(s, lang).map_err(|e| ScriptError::Syntax { line, source: e }))
            .collect()
    };
    Ok(Sequent::new(parse_side(l)?, parse_side(r)?, lang))
}

fn parse_formula_param(s: &str, lang: Lang, line: u32) -> Result<Formula, ScriptError> {
    Formula::parse(s.trim(), lang).map_err(|e| ScriptError::Syntax { line, source: e })
}

fn parse_term_param(s: &str, lang: Lang, line: u32) -> Result<Term, ScriptError> {
    Term::parse(s.trim(), lang).map_err(|e| ScriptError::Syntax { line, source: e })
}

fn parse_var_param(s: &str, line: u32) -> Result<u32, ScriptError> {
    match Term::parse(s.trim(), Lang::LTArrowP) {
        Ok(Term::Var(v)) => Ok(v),
        _ => Err(ScriptError::Malformed {
            line,
            msg: format!("expected a variable, found '{s}'"),
        }),
    }
}

fn parse_rule(
    name: &str,
    params: &[String],
    lang: Lang,
    line: u32,
) -> Result<Rule, ScriptError> {
    let wrong = |msg: &str| ScriptError::Malformed {
        line,
        msg: msg.to_string(),
    };
    let one = || -> Result<&String, ScriptError> {
        params.first().ok_or_else(|| wrong("rule needs a parameter"))
    };
    match name {
        _ if name.starts_with("axiom:") => {
            let id = AxiomId::from_name(&name["axiom:".len()..])
                .ok_or_else(|| ScriptError::UnknownRule {
                    line,
                    name: name.to_string(),
                })?;
            Ok(Rule::Axiom(id))
        }
        "cut" => Ok(Rule::Cut {
            cut: parse_formula_param(one()?, lang, line)?,
        }),
        "lw" => Ok(Rule::LW {
            formula: parse_formula_param(one()?, lang, line)?,
        }),
        "rw" => Ok(Rule::RW {
            formula: parse_formula_param(one()?, lang, line)?,
        }),
        "lc" => Ok(Rule::LC {
            formula: parse_formula_param(one()?, lang, line)?,
        }),
        "rc" => Ok(Rule::RC {
            formula: parse_formula_param(one()?, lang, line)?,
        }),
        "l-or" => Ok(Rule::LOr {
            principal: parse_formula_param(one()?, lang, line)?,
        }),
        "r-or" => Ok(Rule::ROr {
            principal: parse_formula_param(one()?, lang, line)?,
        }),
        "l-imp" => Ok(Rule::LImp {
            principal: parse_formula_param(one()?, lang, line)?,
        }),
        "r-imp" => {
            let principal = parse_formula_param(one()?, lang, line)?;
            let delta = params[1..]
                .iter()
                .map(|s| parse_formula_param(s, lang, line))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Rule::RImp { principal, delta })
        }
        "con-cp" => Ok(Rule::ConCp),
        "cl-cp" => Ok(Rule::ClCp),
        "l-all" => {
            if params.len() != 2 {
                return Err(wrong("l-all needs [formula; witness]"));
            }
            Ok(Rule::LAll {
                principal: parse_formula_param(&params[0], lang, line)?,
                witness: parse_term_param(&params[1], lang, line)?,
            })
        }
        "r-all" => {
            if params.len() != 2 {
                return Err(wrong("r-all needs [formula; eigenvariable]"));
            }
            Ok(Rule::RAll {
                principal: parse_formula_param(&params[0], lang, line)?,
                eigen: parse_var_param(&params[1], line)?,
            })
        }
        "ind-r" => {
            if params.len() != 3 {
                return Err(wrong("ind-r needs [formula; variable; target]"));
            }
            Ok(Rule::IndR {
                body: parse_formula_param(&params[0], lang, line)?,
                var: parse_var_param(&params[1], line)?,
                target: parse_term_param(&params[2], lang, line)?,
            })
        }
        "ti-r" => {
            if params.len() < 6 {
                return Err(wrong(
                    "ti-r needs [formula; variable; ordinal; eta; zeta; xi; delta...]",
                ));
            }
            let alpha = Ordinal::parse(params[2].trim()).map_err(|e| ScriptError::Malformed {
                line,
                msg: e.to_string(),
            })?;
            let delta = params[6..]
                .iter()
                .map(|s| parse_formula_param(s, lang, line))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Rule::TiR {
                body: parse_formula_param(&params[0], lang, line)?,
                var: parse_var_param(&params[1], line)?,
                alpha,
                eta: parse_var_param(&params[3], line)?,
                zeta: parse_var_param(&params[4], line)?,
                xi: parse_var_param(&params[5], line)?,
                delta,
            })
        }
        "subst" => {
            if params.len() != 2 {
                return Err(wrong("subst needs [formula; variable]"));
            }
            Ok(Rule::Subst {
                body: parse_formula_param(&params[0], lang, line)?,
                var: parse_var_param(&params[1], line)?,
            })
        }
        other => Err(ScriptError::UnknownRule {
            line,
            name: other.to_string(),
        }),
    }
}

/// Parses a proof script into a derivation tree. Premise references may be
/// shared; shared subproofs are duplicated into the tree.
pub fn parse_script(text: &str, lang: Lang) -> Result<Derivation, ScriptError> {
    let mut nodes: BTreeMap<u32, Derivation> = BTreeMap::new();
    let mut last: Option<u32> = None;
    for raw in text.lines() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (num_text, rest) = trimmed.split_once(':').ok_or_else(|| ScriptError::Malformed {
            line: 0,
            msg: format!("missing line number in '{trimmed}'"),
        })?;
        let line: u32 = num_text.trim().parse().map_err(|_| ScriptError::Malformed {
            line: 0,
            msg: format!("bad line number '{num_text}'"),
        })?;
        let (seq_text, rule_text) =
            rest.split_once(';').ok_or_else(|| ScriptError::Malformed {
                line,
                msg: "missing ';' between sequent and rule".into(),
            })?;
        let conclusion = parse_sequent(seq_text.trim(), lang, line)?;
        let rule_text = rule_text.trim();
        // rule name, optional [params], premise refs
        let (head, after) = match rule_text.find('[') {
            Some(open) => {
                let close = rule_text.rfind(']').ok_or_else(|| ScriptError::Malformed {
                    line,
                    msg: "unclosed '['".into(),
                })?;
                (
                    (&rule_text[..open]).trim(),
                    Some((&rule_text[open + 1..close], &rule_text[close + 1..])),
                )
            }
            None => {
                let mut parts = rule_text.splitn(2, char::is_whitespace);
                let head = parts.next().unwrap_or("");
                (head, parts.next().map(|r| ("", r)))
            }
        };
        let (params_text, refs_text) = match after {
            Some((p, r)) => (p, r),
            None => ("", ""),
        };
        let params: Vec<String> = if params_text.trim().is_empty() {
            Vec::new()
        } else {
            split_top_level(params_text, ';')
        };
        let rule = parse_rule(head, &params, lang, line)?;
        let mut premises = Vec::new();
        for tok in refs_text.split_whitespace() {
            let referenced: u32 = tok.parse().map_err(|_| ScriptError::Malformed {
                line,
                msg: format!("bad premise reference '{tok}'"),
            })?;
            let premise = nodes.get(&referenced).ok_or(ScriptError::BadReference {
                line,
                referenced,
            })?;
            premises.push(premise.clone());
        }
        nodes.insert(
            line,
            Derivation {
                conclusion,
                rule,
                premises,
                label: Some(line),
            },
        );
        last = Some(line);
    }
    let root = last.ok_or(ScriptError::Empty)?;
    Ok(nodes.remove(&root).unwrap())
}

fn rule_text(rule: &Rule) -> String {
    match rule {
        Rule::Axiom(id) => format!("axiom:{}", id.name()),
        Rule::Cut { cut } => format!("cut[{cut}]"),
        Rule::LW { formula } => format!("lw[{formula}]"),
        Rule::RW { formula } => format!("rw[{formula}]"),
        Rule::LC { formula } => format!("lc[{formula}]"),
        Rule::RC { formula } => format!("rc[{formula}]"),
        Rule::LOr { principal } => format!("l-or[{principal}]"),
        Rule::ROr { principal } => format!("r-or[{principal}]"),
        Rule::LImp { principal } => format!("l-imp[{principal}]"),
        Rule::RImp { principal, delta } => {
            let mut s = format!("r-imp[{principal}");
            for d in delta {
                let _ = write!(s, "; {d}");
            }
            s.push(']');
            s
        }
        Rule::ConCp => "con-cp".into(),
        Rule::ClCp => "cl-cp".into(),
        Rule::LAll { principal, witness } => format!("l-all[{principal}; {witness}]"),
        Rule::RAll { principal, eigen } => format!("r-all[{principal}; v{eigen}]"),
        Rule::IndR { body, var, target } => format!("ind-r[{body}; v{var}; {target}]"),
        Rule::TiR {
            body,
            var,
            alpha,
            eta,
            zeta,
            xi,
            delta,
        } => {
            let mut s = format!("ti-r[{body}; v{var}; {alpha}; v{eta}; v{zeta}; v{xi}");
            for d in delta {
                let _ = write!(s, "; {d}");
            }
            s.push(']');
            s
        }
        Rule::Subst { body, var } => format!("subst[{body}; v{var}]"),
    }
}

/// Serializes a derivation as a proof script, numbering nodes in postorder.
pub fn print_script(d: &Derivation) -> String {
    fn go(d: &Derivation, next: &mut u32, out: &mut String) -> u32 {
        let mut refs = Vec::new();
        for p in &d.premises {
            refs.push(go(p, next, out));
        }
        let line = *next;
        *next += 1;
        let _ = write!(out, "{line}: {} ; {}", d.conclusion, rule_text(&d.rule));
        for r in refs {
            let _ = write!(out, " {r}");
        }
        out.push('\n');
        line
    }
    let mut out = String::new();
    let mut next = 1;
    go(d, &mut next, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check, System};

    #[test]
    fn tiny_script_checks() {
        let text = "\
# double negation introduction
1: !(0=0) => !(0=0) ; axiom:id
2: 0=0 => !!(0=0) ; con-cp 1
";
        let d = parse_script(text, Lang::LT).unwrap();
        let report = check(&d, System::G1h);
        assert!(report.ok, "{report}");
        assert_eq!(report.height, 1);
    }

    #[test]
    fn script_roundtrip() {
        let text = "\
1: !(0=0) => !(0=0) ; axiom:id
2: 0=0 => !!(0=0) ; con-cp 1
3: 0=0, Tr(v0) => !!(0=0) ; lw[Tr(v0)] 2
";
        let d = parse_script(text, Lang::LT).unwrap();
        let printed = print_script(&d);
        let d2 = parse_script(&printed, Lang::LT).unwrap();
        assert_eq!(d.conclusion, d2.conclusion);
        assert!(check(&d2, System::G1h).ok);
    }

    #[test]
    fn bad_reference_reported() {
        let text = "1: 0=0 => 0=0 ; con-cp 7\n";
        assert!(matches!(
            parse_script(text, Lang::LT),
            Err(ScriptError::BadReference { referenced: 7, .. })
        ));
    }
}
