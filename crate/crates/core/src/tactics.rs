//! Combinators for building kernel-checkable derivations.
//!
//! Everything here goes through `Derivation::infer`, so every node is
//! verified by forward rule application at construction time. The defined
//! connectives get their admissible rules as macro expansions into primitive
//! rules: conjunction and existential rules elaborate to contraposition
//! steps, cuts and weakenings.

use crate::kernel::{AxiomId, Derivation, Rule, RuleError, Sequent};
use crate::syntax::{Formula, Lang, Term};

type D = Result<Derivation, RuleError>;

/// `A => A`.
pub fn did(f: Formula, lang: Lang) -> D {
    Derivation::axiom(AxiomId::Id, Sequent::new(vec![f.clone()], vec![f], lang))
}

/// `bot =>`.
pub fn dbot(lang: Lang) -> D {
    Derivation::axiom(AxiomId::LBot, Sequent::new(vec![Formula::Bot], vec![], lang))
}

/// `=> t = t`.
pub fn dref(t: Term, lang: Lang) -> D {
    Derivation::axiom(
        AxiomId::Ref,
        Sequent::new(vec![], vec![Formula::Eq(t.clone(), t)], lang),
    )
}

/// `s = t, C(s) => C(t)`.
pub fn drep(eq: Formula, from: Formula, to: Formula, lang: Lang) -> D {
    Derivation::axiom(AxiomId::Rep, Sequent::new(vec![eq, from], vec![to], lang))
}

fn multiset_sub(big: &[Formula], small: &[Formula]) -> Option<Vec<Formula>> {
    let mut rest = big.to_vec();
    for f in small {
        let i = rest.iter().position(|x| x == f)?;
        rest.remove(i);
    }
    Some(rest)
}

/// Weakened copy of `d` whose conclusion is exactly `ante => succ`; the
/// targets must be multiset supersets of the current conclusion.
pub fn weaken_to(d: Derivation, ante: &[Formula], succ: &[Formula]) -> D {
    let lang = d.conclusion.lang;
    let target = Sequent::new(ante.to_vec(), succ.to_vec(), lang);
    let add_left = multiset_sub(target.ante(), d.conclusion.ante()).ok_or(RuleError::Shape {
        rule: "weaken".into(),
        msg: format!(
            "antecedent `{}` is not contained in the target `{}`",
            d.conclusion, target
        ),
    })?;
    let add_right =
        multiset_sub(target.succ(), d.conclusion.succ()).ok_or(RuleError::Shape {
            rule: "weaken".into(),
            msg: format!(
                "succedent `{}` is not contained in the target `{}`",
                d.conclusion, target
            ),
        })?;
    let mut cur = d;
    for f in add_left {
        cur = Derivation::infer(Rule::LW { formula: f }, vec![cur])?;
    }
    for f in add_right {
        cur = Derivation::infer(Rule::RW { formula: f }, vec![cur])?;
    }
    Ok(cur)
}

/// Cut on `c` in the context `ante => succ`: `pos` must weaken to
/// `ante => succ, c` and `neg` to `c, ante => succ`.
pub fn cut_in(
    c: Formula,
    pos: Derivation,
    neg: Derivation,
    ante: &[Formula],
    succ: &[Formula],
) -> D {
    let mut succ_c = succ.to_vec();
    succ_c.push(c.clone());
    let mut ante_c = ante.to_vec();
    ante_c.push(c.clone());
    let p1 = weaken_to(pos, ante, &succ_c)?;
    let p2 = weaken_to(neg, &ante_c, succ)?;
    Derivation::infer(Rule::Cut { cut: c }, vec![p1, p2])
}

/// `=> !bot`.
pub fn dtop(lang: Lang) -> D {
    Derivation::infer(Rule::ConCp, vec![dbot(lang)?])
}

/// `A => !!A`.
pub fn dn_intro(a: Formula, lang: Lang) -> D {
    Derivation::infer(Rule::ConCp, vec![did(Formula::neg(a), lang)?])
}

/// `!!A => A`.
pub fn dn_elim(a: Formula, lang: Lang) -> D {
    Derivation::infer(Rule::ClCp, vec![did(Formula::neg(a), lang)?])
}

/// Admissible contraposition: from `G => D` derive `!D => !G`.
pub fn contrapose(d: Derivation) -> D {
    let lang = d.conclusion.lang;
    let gamma: Vec<Formula> = d.conclusion.ante().to_vec();
    let delta: Vec<Formula> = d.conclusion.succ().to_vec();

    // replace each antecedent member by its double negation
    let mut cur = d;
    for g in &gamma {
        let nn = Formula::neg(Formula::neg(g.clone()));
        let mut ante: Vec<Formula> = cur.conclusion.ante().to_vec();
        let i = ante.iter().position(|x| x == g).unwrap();
        ante.remove(i);
        ante.push(nn.clone());
        let succ: Vec<Formula> = cur.conclusion.succ().to_vec();
        cur = cut_in(g.clone(), dn_elim(g.clone(), lang)?, cur, &ante, &succ)?;
    }
    // replace each succedent member by its double negation
    for dl in &delta {
        let nn = Formula::neg(Formula::neg(dl.clone()));
        let mut succ: Vec<Formula> = cur.conclusion.succ().to_vec();
        let i = succ.iter().position(|x| x == dl).unwrap();
        succ.remove(i);
        succ.push(nn.clone());
        let ante: Vec<Formula> = cur.conclusion.ante().to_vec();
        cur = cut_in(dl.clone(), cur, dn_intro(dl.clone(), lang)?, &ante, &succ)?;
    }
    // now !!G => !!D; one class-contraposition gives !!!D => !G
    cur = Derivation::infer(Rule::ClCp, vec![cur])?;
    // lower each !!!d to !d
    for dl in &delta {
        let nd = Formula::neg(dl.clone());
        let nnn = Formula::neg(Formula::neg(nd.clone()));
        let mut ante: Vec<Formula> = cur.conclusion.ante().to_vec();
        let i = ante.iter().position(|x| x == &nnn).unwrap();
        ante.remove(i);
        ante.push(nd.clone());
        let succ: Vec<Formula> = cur.conclusion.succ().to_vec();
        cur = cut_in(nnn, dn_intro(nd, lang)?, cur, &ante, &succ)?;
    }
    Ok(cur)
}

/// `A, B => A & B` where `A & B` is the defined conjunction.
fn and_intro_pair(a: Formula, b: Formula, lang: Lang) -> D {
    let na = Formula::neg(a.clone());
    let nb = Formula::neg(b.clone());
    let dis = Formula::or(na.clone(), nb.clone());
    // !A | !B => !A, !B
    let left = weaken_to(did(na.clone(), lang)?, &[na.clone()], &[na.clone(), nb.clone()])?;
    let right = weaken_to(did(nb.clone(), lang)?, &[nb.clone()], &[na.clone(), nb.clone()])?;
    let split = Derivation::infer(
        Rule::LOr {
            principal: dis.clone(),
        },
        vec![left, right],
    )?;
    // contraposition-style step: A, B => !(!A | !B)
    Derivation::infer(Rule::ConCp, vec![split])
}

/// Derived right conjunction: from `G => A, D` and `G => B, D` derive
/// `G => A & B, D`.
pub fn r_and(a: Formula, b: Formula, d1: Derivation, d2: Derivation) -> D {
    let lang = d1.conclusion.lang;
    let conj = Formula::and(a.clone(), b.clone());
    let gamma = multiset_sub(d1.conclusion.ante(), &[]).unwrap();
    let delta = multiset_sub(d1.conclusion.succ(), &[a.clone()]).ok_or(RuleError::Shape {
        rule: "r-and".into(),
        msg: "left conjunct missing".into(),
    })?;
    let mut target_succ = delta.clone();
    target_succ.push(conj.clone());
    // cut B, then A, against the pairing gadget
    let inner = cut_in(
        a.clone(),
        d1,
        and_intro_pair(a.clone(), b.clone(), lang)?,
        &{
            let mut v = gamma.clone();
            v.push(b.clone());
            v
        },
        &target_succ,
    )?;
    cut_in(b, d2, inner, &gamma, &target_succ)
}

/// Derived left conjunction: from `A, B, G => D` derive `A & B, G => D`.
pub fn l_and(a: Formula, b: Formula, d: Derivation) -> D {
    let lang = d.conclusion.lang;
    let conj = Formula::and(a.clone(), b.clone());
    // A & B => A and A & B => B via contraposition of disjunct introduction
    let proj = |x: Formula, other: Formula, left: bool| -> D {
        let nx = Formula::neg(x.clone());
        let nother = Formula::neg(other.clone());
        let dis = if left {
            Formula::or(nx.clone(), nother.clone())
        } else {
            Formula::or(nother.clone(), nx.clone())
        };
        let base = weaken_to(did(nx.clone(), lang)?, &[nx.clone()], &[nx.clone(), nother.clone()])?;
        let intro = Derivation::infer(
            Rule::ROr {
                principal: dis.clone(),
            },
            vec![base],
        )?;
        // !x => dis, contraposed: !dis => !!x, then lower
        let contra = contrapose(intro)?;
        let nn = Formula::neg(nx.clone());
        cut_in(
            nn,
            contra,
            dn_elim(x.clone(), lang)?,
            &[Formula::neg(dis)],
            &[x],
        )
    };
    let d_a = proj(a.clone(), b.clone(), true)?;
    let d_b = proj(b.clone(), a.clone(), false)?;
    let gamma = multiset_sub(d.conclusion.ante(), &[a.clone(), b.clone()]).ok_or(
        RuleError::Shape {
            rule: "l-and".into(),
            msg: "conjuncts missing in premise".into(),
        },
    )?;
    let delta = d.conclusion.succ().to_vec();
    let mut with_conj = gamma.clone();
    with_conj.push(conj.clone());
    let mut with_conj_a = with_conj.clone();
    with_conj_a.push(a.clone());
    let inner = cut_in(b.clone(), d_b, d, &with_conj_a, &delta)?;
    cut_in(a, d_a, inner, &with_conj, &delta)
}

/// Derived right existential: from `G => D, B(t)` derive `G => D, ex x B`.
pub fn r_ex(body: Formula, var: u32, witness: Term, d: Derivation) -> D {
    let lang = d.conclusion.lang;
    let exf = Formula::ex(var, body.clone());
    let all_neg = Formula::all(var, Formula::neg(body.clone()));
    let inst = body.substitute(var, &witness);
    // all x !B => !B(t), then contraposition step gives B(t) => ex x B
    let base = did(Formula::neg(inst.clone()), lang)?;
    let l = Derivation::infer(
        Rule::LAll {
            principal: all_neg.clone(),
            witness: witness.clone(),
        },
        vec![base],
    )?;
    let gadget = Derivation::infer(Rule::ConCp, vec![l])?; // B(t) => !all x !B
    let gamma = d.conclusion.ante().to_vec();
    let delta = multiset_sub(d.conclusion.succ(), &[inst.clone()]).ok_or(RuleError::Shape {
        rule: "r-ex".into(),
        msg: "witness instance missing in premise".into(),
    })?;
    let mut succ = delta;
    succ.push(exf);
    cut_in(inst, d, gadget, &gamma, &succ)
}

/// Derived left existential: from `B(y), G => D` with `y` fresh derive
/// `ex x B, G => D`.
pub fn l_ex(body: Formula, var: u32, eigen: u32, d: Derivation) -> D {
    let lang = d.conclusion.lang;
    let exf = Formula::ex(var, body.clone());
    let all_neg = Formula::all(var, Formula::neg(body.clone()));
    let inst = body.substitute(var, &Term::Var(eigen));
    let gamma = multiset_sub(d.conclusion.ante(), &[inst.clone()]).ok_or(RuleError::Shape {
        rule: "l-ex".into(),
        msg: "eigenvariable instance missing in premise".into(),
    })?;
    let delta = d.conclusion.succ().to_vec();
    // contrapose to !D => !B(y), !G, then bind y
    let contra = contrapose(d)?;
    let bound = Derivation::infer(
        Rule::RAll {
            principal: all_neg.clone(),
            eigen,
        },
        vec![contra],
    )?;
    // contrapose back: !(all x !B), !!G => !!D
    let back = contrapose(bound)?;
    // clean up double negations on both sides
    let mut cur = back;
    for g in &gamma {
        let nn = Formula::neg(Formula::neg(g.clone()));
        let mut ante: Vec<Formula> = cur.conclusion.ante().to_vec();
        let i = ante.iter().position(|x| x == &nn).ok_or(RuleError::Shape {
            rule: "l-ex".into(),
            msg: "expected double negation in context".into(),
        })?;
        ante.remove(i);
        ante.push(g.clone());
        let succ: Vec<Formula> = cur.conclusion.succ().to_vec();
        cur = cut_in(nn, dn_intro(g.clone(), lang)?, cur, &ante, &succ)?;
    }
    for dl in &delta {
        let nn = Formula::neg(Formula::neg(dl.clone()));
        let mut succ: Vec<Formula> = cur.conclusion.succ().to_vec();
        let i = succ.iter().position(|x| x == &nn).ok_or(RuleError::Shape {
            rule: "l-ex".into(),
            msg: "expected double negation in succedent".into(),
        })?;
        succ.remove(i);
        succ.push(dl.clone());
        let ante: Vec<Formula> = cur.conclusion.ante().to_vec();
        cur = cut_in(nn, cur, dn_elim(dl.clone(), lang)?, &ante, &succ)?;
    }
    debug_assert_eq!(
        cur.conclusion,
        Sequent::new(
            {
                let mut v = gamma.clone();
                v.push(exf);
                v
            },
            delta,
            lang
        )
    );
    Ok(cur)
}

/// `s = t => t = s`.
pub fn sym_eq(s: Term, t: Term, lang: Lang) -> D {
    let st = Formula::Eq(s.clone(), t.clone());
    let ss = Formula::Eq(s.clone(), s.clone());
    let ts = Formula::Eq(t, s.clone());
    // rep with context `v = s`: s = t, s = s => t = s
    let rep = drep(st.clone(), ss.clone(), ts.clone(), lang)?;
    cut_in(ss, dref(s, lang)?, rep, &[st.clone()], &[ts])
}

/// Rewrites an antecedent hypothesis along an equation: given `eq_d : => s = t`
/// and `d : C(t), G => D`, produces `C(s), G => D`. `from` is `C(s)`, `to` is
/// `C(t)`; they must differ only by the replacement.
pub fn rw_ante(
    eq: Formula,
    eq_d: Derivation,
    from: Formula,
    to: Formula,
    d: Derivation,
) -> D {
    let lang = d.conclusion.lang;
    let gamma = multiset_sub(d.conclusion.ante(), &[to.clone()]).ok_or(RuleError::Shape {
        rule: "rw".into(),
        msg: "rewrite target missing in premise".into(),
    })?;
    let delta = d.conclusion.succ().to_vec();
    let rep = drep(eq.clone(), from.clone(), to.clone(), lang)?;
    let mut ante_from = gamma.clone();
    ante_from.push(from.clone());
    // discharge the equation, then cut the rewritten formula
    let step = cut_in(eq, eq_d, rep, &[from.clone()], &[to.clone()])?;
    cut_in(to, step, d, &ante_from, &delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check, System};
    use crate::syntax::Lang;

    fn atom(i: u64) -> Formula {
        Formula::Tr(Term::num_u64(i))
    }

    fn assert_checks(d: &Derivation, sys: System) {
        let r = check(d, sys);
        assert!(r.ok, "{r}");
    }

    #[test]
    fn basic_gadgets() {
        let p = atom(0);
        let lang = Lang::LT;
        assert_checks(&dtop(lang).unwrap(), System::G1h);
        let di = dn_intro(p.clone(), lang).unwrap();
        assert_eq!(
            di.conclusion,
            Sequent::new(
                vec![p.clone()],
                vec![Formula::neg(Formula::neg(p.clone()))],
                lang
            )
        );
        assert_checks(&di, System::G1h);
        assert_checks(&dn_elim(p, lang).unwrap(), System::G1h);
    }

    #[test]
    fn contrapose_identity() {
        let p = atom(0);
        let d = did(p.clone(), Lang::LT).unwrap();
        let c = contrapose(d).unwrap();
        assert_eq!(
            c.conclusion,
            Sequent::new(
                vec![Formula::neg(p.clone())],
                vec![Formula::neg(p)],
                Lang::LT
            )
        );
        assert_checks(&c, System::G1h);
    }

    #[test]
    fn contrapose_multi() {
        let p = atom(0);
        let q = atom(1);
        // p, q => p weakened with succedent q
        let d = weaken_to(
            did(p.clone(), Lang::LT).unwrap(),
            &[p.clone(), q.clone()],
            &[p.clone(), q.clone()],
        )
        .unwrap();
        let c = contrapose(d).unwrap();
        assert_eq!(
            c.conclusion,
            Sequent::new(
                vec![Formula::neg(p.clone()), Formula::neg(q.clone())],
                vec![Formula::neg(p), Formula::neg(q)],
                Lang::LT
            )
        );
        assert_checks(&c, System::G1h);
    }

    #[test]
    fn conjunction_macros_check() {
        let p = atom(0);
        let q = atom(1);
        let lang = Lang::LT;
        // from p, q => p & q context pieces
        let d1 = weaken_to(did(p.clone(), lang).unwrap(), &[p.clone(), q.clone()], &[p.clone()])
            .unwrap();
        let d2 = weaken_to(did(q.clone(), lang).unwrap(), &[p.clone(), q.clone()], &[q.clone()])
            .unwrap();
        let conj = r_and(p.clone(), q.clone(), d1, d2).unwrap();
        assert_eq!(
            conj.conclusion,
            Sequent::new(
                vec![p.clone(), q.clone()],
                vec![Formula::and(p.clone(), q.clone())],
                lang
            )
        );
        assert_checks(&conj, System::G1h);

        let back = l_and(
            p.clone(),
            q.clone(),
            weaken_to(did(p.clone(), lang).unwrap(), &[p.clone(), q.clone()], &[p.clone()])
                .unwrap(),
        )
        .unwrap();
        assert_eq!(
            back.conclusion,
            Sequent::new(
                vec![Formula::and(p.clone(), q.clone())],
                vec![p.clone()],
                lang
            )
        );
        assert_checks(&back, System::G1h);
    }

    #[test]
    fn existential_macros_check() {
        let lang = Lang::LT;
        let body = Formula::Tr(Term::Var(0));
        // right: from => Tr(5) derive => ex v0 Tr(v0) (with premise as id cut base)
        let base = did(body.substitute(0, &Term::num_u64(5)), lang).unwrap();
        let d = r_ex(body.clone(), 0, Term::num_u64(5), base).unwrap();
        assert_eq!(
            *d.conclusion.succ().last().unwrap(),
            Formula::ex(0, body.clone())
        );
        assert_checks(&d, System::G1h);

        // left rule needs an eigenvariable-free context and succedent
        let inst = body.substitute(0, &Term::Var(7));
        let goal = atom(3);
        let base = weaken_to(
            did(goal.clone(), lang).unwrap(),
            &[inst.clone(), goal.clone()],
            &[goal.clone()],
        )
        .unwrap();
        let d2 = l_ex(body.clone(), 0, 7, base).unwrap();
        assert_eq!(
            d2.conclusion,
            Sequent::new(
                vec![Formula::ex(0, body), goal.clone()],
                vec![goal],
                lang
            )
        );
        assert_checks(&d2, System::G1h);
    }

    #[test]
    fn symmetry_checks() {
        let d = sym_eq(Term::Var(0), Term::Var(1), Lang::LN).unwrap();
        assert_eq!(
            d.conclusion,
            Sequent::new(
                vec![Formula::Eq(Term::Var(0), Term::Var(1))],
                vec![Formula::Eq(Term::Var(1), Term::Var(0))],
                Lang::LN
            )
        );
        assert_checks(&d, System::G1hEq);
    }
}
