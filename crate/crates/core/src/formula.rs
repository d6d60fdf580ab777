//! First-order formula trees shared by the finite-field and finite-structure
//! modules, as JSON prefix trees:
//! `{"+":[t,..]}`, `{"*":[t,..]}`, `{"-":[t]}` (negation) or `{"-":[a,b,..]}`,
//! `{"const":n}`, `{"var":"x"}`, `{"app":{"name":"f","args":[..]}}`,
//! `{"=":[a,b]}`, `{"rel":{"name":"R","args":[..]}}`, `{"and":[..]}`,
//! `{"or":[..]}`, `{"not":f}`, `{"exists":{"var":"z","body":f}}`,
//! `{"forall":{..}}`, `"true"`, `"false"`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Term {
    #[serde(rename = "+")]
    Add(Vec<Term>),
    #[serde(rename = "*")]
    Mul(Vec<Term>),
    #[serde(rename = "-")]
    Sub(Vec<Term>),
    #[serde(rename = "const")]
    Const(i64),
    #[serde(rename = "var")]
    Var(String),
    #[serde(rename = "app")]
    App { name: String, args: Vec<Term> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Binder {
    pub var: String,
    pub body: Box<Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Formula {
    #[serde(rename = "true")]
    True,
    #[serde(rename = "false")]
    False,
    #[serde(rename = "=")]
    Eq(Term, Term),
    #[serde(rename = "rel")]
    Rel { name: String, args: Vec<Term> },
    #[serde(rename = "and")]
    And(Vec<Formula>),
    #[serde(rename = "or")]
    Or(Vec<Formula>),
    #[serde(rename = "not")]
    Not(Box<Formula>),
    #[serde(rename = "exists")]
    Exists(Binder),
    #[serde(rename = "forall")]
    Forall(Binder),
}

pub fn var(name: &str) -> Term {
    Term::Var(name.to_string())
}

impl Formula {
    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(Binder {
            var: v.to_string(),
            body: Box::new(body),
        })
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::Forall(Binder {
            var: v.to_string(),
            body: Box::new(body),
        })
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Rel { args, .. } => args.iter().for_each(|t| t.collect_free(bound, out)),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_free(bound, out))
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::Exists(b) | Formula::Forall(b) => {
                bound.push(b.var.clone());
                b.body.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

impl Term {
    fn collect_free(&self, bound: &[String], out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) if !bound.contains(v) => {
                out.insert(v.clone());
            }
            Term::Var(_) | Term::Const(_) => {}
            Term::Add(ts) | Term::Mul(ts) | Term::Sub(ts) | Term::App { args: ts, .. } => {
                ts.iter().for_each(|t| t.collect_free(bound, out))
            }
        }
    }
}

/// A finite structure with universe {0, .., size-1}.
pub trait Interpretation {
    fn size(&self) -> u64;

    fn constant(&self, c: i64) -> Result<u64> {
        if c >= 0 && (c as u64) < self.size() {
            Ok(c as u64)
        } else {
            Err(Error::Formula(format!("constant {c} is not a universe element")))
        }
    }

    fn add(&self, _a: u64, _b: u64) -> Result<u64> {
        Err(Error::Formula("this structure has no addition".into()))
    }

    fn mul(&self, _a: u64, _b: u64) -> Result<u64> {
        Err(Error::Formula("this structure has no multiplication".into()))
    }

    fn neg(&self, _a: u64) -> Result<u64> {
        Err(Error::Formula("this structure has no negation".into()))
    }

    fn function(&self, name: &str, _args: &[u64]) -> Result<u64> {
        Err(Error::Formula(format!("unknown function {name}")))
    }

    fn relation(&self, name: &str, _args: &[u64]) -> Result<bool> {
        Err(Error::Formula(format!("unknown relation {name}")))
    }
}

/// Variable bindings; later bindings shadow earlier ones.
#[derive(Clone, Debug, Default)]
pub struct Env {
    slots: Vec<(String, u64)>,
}

impl Env {
    pub fn new(bindings: &[(&str, u64)]) -> Self {
        Env {
            slots: bindings.iter().map(|(n, v)| (n.to_string(), *v)).collect(),
        }
    }

    pub fn bind(vars: &[String], values: &[u64]) -> Result<Self> {
        if vars.len() != values.len() {
            return Err(Error::Formula(format!(
                "{} variables but {} values",
                vars.len(),
                values.len()
            )));
        }
        Ok(Env {
            slots: vars.iter().cloned().zip(values.iter().copied()).collect(),
        })
    }

    pub fn push(&mut self, name: &str, value: u64) {
        self.slots.push((name.to_string(), value));
    }

    pub fn pop(&mut self) {
        self.slots.pop();
    }

    fn set_last(&mut self, value: u64) {
        if let Some(s) = self.slots.last_mut() {
            s.1 = value;
        }
    }

    fn get(&self, name: &str) -> Result<u64> {
        self.slots
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::Formula(format!("unbound variable {name}")))
    }
}

pub fn eval_term<I: Interpretation + ?Sized>(m: &I, t: &Term, env: &Env) -> Result<u64> {
    match t {
        Term::Const(c) => m.constant(*c),
        Term::Var(v) => env.get(v),
        Term::Add(ts) => fold(m, ts, env, |a, b| m.add(a, b), "+"),
        Term::Mul(ts) => fold(m, ts, env, |a, b| m.mul(a, b), "*"),
        Term::Sub(ts) => match ts.as_slice() {
            [] => Err(Error::Formula("'-' needs at least one argument".into())),
            [a] => m.neg(eval_term(m, a, env)?),
            [first, rest @ ..] => {
                let mut acc = eval_term(m, first, env)?;
                for r in rest {
                    acc = m.add(acc, m.neg(eval_term(m, r, env)?)?)?;
                }
                Ok(acc)
            }
        },
        Term::App { name, args } => {
            let vals = args
                .iter()
                .map(|a| eval_term(m, a, env))
                .collect::<Result<Vec<_>>>()?;
            m.function(name, &vals)
        }
    }
}

fn fold<I: Interpretation + ?Sized>(
    m: &I,
    ts: &[Term],
    env: &Env,
    op: impl Fn(u64, u64) -> Result<u64>,
    symbol: &str,
) -> Result<u64> {
    let (first, rest) = ts
        .split_first()
        .ok_or_else(|| Error::Formula(format!("'{symbol}' needs at least one argument")))?;
    rest.iter()
        .try_fold(eval_term(m, first, env)?, |acc, t| op(acc, eval_term(m, t, env)?))
}

pub fn eval<I: Interpretation + ?Sized>(m: &I, f: &Formula, env: &mut Env) -> Result<bool> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Eq(a, b) => eval_term(m, a, env)? == eval_term(m, b, env)?,
        Formula::Rel { name, args } => {
            let vals = args
                .iter()
                .map(|a| eval_term(m, a, env))
                .collect::<Result<Vec<_>>>()?;
            m.relation(name, &vals)?
        }
        Formula::And(fs) => {
            for g in fs {
                if !eval(m, g, env)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(fs) => {
            for g in fs {
                if eval(m, g, env)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Not(g) => !eval(m, g, env)?,
        Formula::Exists(b) => quantify(m, b, env, true)?,
        Formula::Forall(b) => !quantify(m, b, env, false)?,
    })
}

// Searches for a value making the body equal to `target`.
fn quantify<I: Interpretation + ?Sized>(
    m: &I,
    b: &Binder,
    env: &mut Env,
    target: bool,
) -> Result<bool> {
    env.push(&b.var, 0);
    let mut found = false;
    for v in 0..m.size() {
        env.set_last(v);
        match eval(m, &b.body, env) {
            Ok(r) if r == target => {
                found = true;
                break;
            }
            Ok(_) => {}
            Err(e) => {
                env.pop();
                return Err(e);
            }
        }
    }
    env.pop();
    Ok(found)
}

/// Evaluates `f` with `vars[i]` bound to `values[i]`.
pub fn eval_at<I: Interpretation + ?Sized>(
    m: &I,
    f: &Formula,
    vars: &[String],
    values: &[u64],
) -> Result<bool> {
    eval(m, f, &mut Env::bind(vars, values)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Mod7;
    impl Interpretation for Mod7 {
        fn size(&self) -> u64 {
            7
        }
        fn add(&self, a: u64, b: u64) -> Result<u64> {
            Ok((a + b) % 7)
        }
        fn mul(&self, a: u64, b: u64) -> Result<u64> {
            Ok(a * b % 7)
        }
        fn neg(&self, a: u64) -> Result<u64> {
            Ok((7 - a) % 7)
        }
    }

    #[test]
    fn json_shape() {
        let src = r#"{"exists":{"var":"z","body":{"=":[{"*":[{"var":"z"},{"var":"z"}]},{"var":"x"}]}}}"#;
        let f: Formula = serde_json::from_str(src).unwrap();
        assert_eq!(serde_json::to_string(&f).unwrap(), src);
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["x"]);
        let t: Formula = serde_json::from_str(r#""true""#).unwrap();
        assert_eq!(t, Formula::True);
    }

    #[test]
    fn evaluation() {
        let square = Formula::exists("z", Formula::Eq(Term::Mul(vec![var("z"), var("z")]), var("x")));
        let residues: Vec<u64> = (0..7)
            .filter(|&x| eval(&Mod7, &square, &mut Env::new(&[("x", x)])).unwrap())
            .collect();
        assert_eq!(residues, vec![0, 1, 2, 4]);
        let diff = Formula::Eq(Term::Sub(vec![Term::Const(2), Term::Const(5)]), Term::Const(4));
        assert!(eval(&Mod7, &diff, &mut Env::default()).unwrap());
        let all = Formula::forall("y", Formula::Eq(Term::Add(vec![var("y"), Term::Const(0)]), var("y")));
        assert!(eval(&Mod7, &all, &mut Env::default()).unwrap());
    }

    #[test]
    fn errors() {
        let f = Formula::Eq(var("y"), Term::Const(1));
        let err = eval(&Mod7, &f, &mut Env::default()).unwrap_err();
        assert!(err.to_string().contains("unbound variable y"));
        let bad = Formula::Eq(Term::Const(9), Term::Const(1));
        assert!(eval(&Mod7, &bad, &mut Env::default()).is_err());
        let rel = Formula::Rel {
            name: "R".into(),
            args: vec![],
        };
        assert!(eval(&Mod7, &rel, &mut Env::default()).is_err());
    }
}
