//! Generators that emit kernel-checkable derivations, plus the jump-formula
//! and hierarchy-code constructors.
//!
//! Every generator's output passes the kernel; the test suite enforces this
//! master property. Template formulas pick their bound-variable indices
//! deterministically from the input formula, and the progressiveness and
//! jump templates share their inner binder, so instances produced in
//! different places agree syntactically.

use crate::codec::{encode_formula, encode_term, Code};
use crate::kernel::{
    cnf_bound_existential, plus_omega_pow, AxiomId, Derivation, OrdLemmaId, Rule, RuleError,
    Sequent,
};
use crate::ordinals::{OrdClass, Ordinal};
use crate::syntax::{FnSym, Formula, Lang, Term};
use crate::tactics::*;
use std::sync::OnceLock;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum DeriveError {
    #[error("formula contains a truth, falsity or schematic predicate")]
    NotArithmetical,
    #[error("formula contains a conditional")]
    HasConditional,
    #[error("tower height {0} exceeds the size guard")]
    SizeGuard(u32),
    #[error("ordinal argument must be positive")]
    ZeroOrdinal,
    #[error("internal construction failed: {0}")]
    Internal(#[from] RuleError),
}

fn zero_num() -> Term {
    Term::Num(Ordinal::zero().code())
}

fn one_num() -> Term {
    Term::Num(Ordinal::one().code())
}

// ------------------------------------------------------------------
// Formula templates

/// First index above everything (free or bound) in `body` and `var`.
fn fresh_base(body: &Formula, var: u32) -> u32 {
    body.all_vars()
        .into_iter()
        .chain(body.free_vars())
        .chain(std::iter::once(var))
        .max()
        .map_or(0, |m| m + 1)
}

/// `all z (z < bound -> A(z))`.
pub fn bounded_all(bound: &Term, body: &Formula, var: u32, z: u32) -> Formula {
    Formula::all(
        z,
        Formula::cond(
            Formula::prec(Term::Var(z), bound.clone()),
            body.substitute(var, &Term::Var(z)),
        ),
    )
}

/// The inner binder shared by the progressiveness and jump templates of a
/// formula, so their bounded universals coincide syntactically.
pub fn shared_binder(body: &Formula, var: u32) -> u32 {
    fresh_base(body, var) + 2
}

/// Progressiveness along the notation order:
/// `all h (all z (z < h -> A(z)) -> A(h))`.
pub fn prog(body: &Formula, var: u32) -> Formula {
    let base = fresh_base(body, var);
    let (zeta, eta) = (base + 2, base + 3);
    Formula::all(
        eta,
        Formula::cond(
            bounded_all(&Term::Var(eta), body, var, zeta),
            body.substitute(var, &Term::Var(eta)),
        ),
    )
}

/// A jump-formula construction together with its source.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JumpFormula {
    pub source: Formula,
    pub source_var: u32,
    pub jumped: Formula,
    pub jumped_var: u32,
}

/// The jump of `A`:
/// `A+(t) = all x (all h (h < x -> A(h)) -> all h (h < oplus(x, ophi(0, t)) -> A(h)))`.
pub fn gentzen_jump(body: &Formula, var: u32) -> JumpFormula {
    let base = fresh_base(body, var);
    let (theta, xi, eta) = (base, base + 1, base + 2);
    let jumped = Formula::all(
        xi,
        Formula::cond(
            bounded_all(&Term::Var(xi), body, var, eta),
            bounded_all(
                &plus_omega_pow(&Term::Var(xi), &Term::Var(theta)),
                body,
                var,
                eta,
            ),
        ),
    );
    JumpFormula {
        source: body.clone(),
        source_var: var,
        jumped,
        jumped_var: theta,
    }
}

/// The generic jump pattern
/// `all h (all z (z < h -> B(z)) -> all z (z < oplus(h, step) -> B(z)))`.
pub fn jump_pattern(body: &Formula, var: u32, step: &Term) -> Formula {
    let base = fresh_base(body, var).max(step.vars().into_iter().max().map_or(0, |m| m + 1));
    let (eta, zeta) = (base, base + 1);
    Formula::all(
        eta,
        Formula::cond(
            bounded_all(&Term::Var(eta), body, var, zeta),
            bounded_all(
                &Term::fun(FnSym::OPlus, vec![Term::Var(eta), step.clone()]),
                body,
                var,
                zeta,
            ),
        ),
    )
}

struct Fresh(u32);

impl Fresh {
    fn next(&mut self) -> u32 {
        let v = self.0;
        self.0 += 1;
        v
    }
}

// ------------------------------------------------------------------
// Proof-building helpers around guarded universals

type D = Result<Derivation, RuleError>;

fn destructure_forall_cond(f: &Formula) -> Option<(u32, Formula, Formula)> {
    match f {
        Formula::All(v, inner) => match &**inner {
            Formula::Cond(g, b) => Some((*v, (**g).clone(), (**b).clone())),
            _ => None,
        },
        _ => None,
    }
}

/// Uses a hypothesis `all v (G(v) -> B(v))` (present once in `ctx`) at
/// `witness`: `guard_d` proves `ctx => succ, G(witness)` and `cont_d`
/// consumes `B(witness), ctx => succ`. The result concludes `ctx => succ`.
fn use_forall_cond(
    universal: &Formula,
    witness: &Term,
    guard_d: Derivation,
    cont_d: Derivation,
    ctx: &[Formula],
    succ: &[Formula],
) -> D {
    let (v, g, b) = destructure_forall_cond(universal).ok_or(RuleError::Shape {
        rule: "use-forall".into(),
        msg: format!("not a guarded universal: {universal}"),
    })?;
    let gw = g.substitute(v, witness);
    let bw = b.substitute(v, witness);
    let mut succ_g = succ.to_vec();
    succ_g.push(gw.clone());
    let p1 = weaken_to(guard_d, ctx, &succ_g)?;
    let mut ctx_b = ctx.to_vec();
    ctx_b.push(bw.clone());
    let p2 = weaken_to(cont_d, &ctx_b, succ)?;
    let limp = Derivation::infer(
        Rule::LImp {
            principal: Formula::cond(gw, bw),
        },
        vec![p1, p2],
    )?;
    let lall = Derivation::infer(
        Rule::LAll {
            principal: universal.clone(),
            witness: witness.clone(),
        },
        vec![limp],
    )?;
    Derivation::infer(
        Rule::LC {
            formula: universal.clone(),
        },
        vec![lall],
    )
}

/// Closes a guarded universal on the right: from
/// `premise: ctx, G(eigen) => B(eigen)` infer `ctx => all v (G -> B), delta`.
fn intro_forall_cond(
    universal: &Formula,
    eigen: u32,
    delta: Vec<Formula>,
    premise: Derivation,
) -> D {
    let (v, g, b) = destructure_forall_cond(universal).ok_or(RuleError::Shape {
        rule: "intro-forall".into(),
        msg: format!("not a guarded universal: {universal}"),
    })?;
    let instance = Formula::cond(
        g.substitute(v, &Term::Var(eigen)),
        b.substitute(v, &Term::Var(eigen)),
    );
    let arrow = Derivation::infer(
        Rule::RImp {
            principal: instance,
            delta,
        },
        vec![premise],
    )?;
    Derivation::infer(
        Rule::RAll {
            principal: universal.clone(),
            eigen,
        },
        vec![arrow],
    )
}

fn ord_lemma(id: OrdLemmaId, ante: Vec<Formula>, succ: Vec<Formula>, lang: Lang) -> D {
    Derivation::axiom(AxiomId::OrdLemma(id), Sequent::new(ante, succ, lang))
}

// ------------------------------------------------------------------
// Basic derivations and recapture

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BasicGoal {
    /// `=> !bot`
    Top,
    /// `A => !!A`
    DnIntro(Formula),
    /// `!!A => A`
    DnElim(Formula),
}

pub fn derive_basic(goal: BasicGoal, lang: Lang) -> Result<Derivation, DeriveError> {
    Ok(match goal {
        BasicGoal::Top => dtop(lang)?,
        BasicGoal::DnIntro(a) => dn_intro(a, lang)?,
        BasicGoal::DnElim(a) => dn_elim(a, lang)?,
    })
}

/// Contraposition as a derivation transformer.
pub fn derive_contrapose(d: Derivation) -> Result<Derivation, DeriveError> {
    Ok(contrapose(d)?)
}

/// `s = t, !(s = t) =>`: no equality gluts.
pub fn derive_eq_explosion(s: &Term, t: &Term, lang: Lang) -> Result<Derivation, DeriveError> {
    let st = Formula::Eq(s.clone(), t.clone());
    let nst = Formula::neg(st.clone());
    let tt = Formula::Eq(t.clone(), t.clone());
    let ntt = Formula::neg(tt.clone());
    // s = t, !(s = t) => !(t = t)
    let rep = drep(st.clone(), nst.clone(), ntt.clone(), lang)?;
    // => !!(t = t) from reflexivity, so !(t = t) =>
    let nn_tt = cut_in(
        tt.clone(),
        dref(t.clone(), lang)?,
        dn_intro(tt, lang)?,
        &[],
        &[Formula::neg(ntt.clone())],
    )?;
    let refute_ntt = Derivation::infer(Rule::ConCp, vec![nn_tt])?;
    Ok(cut_in(ntt, rep, refute_ntt, &[st, nst], &[])?)
}

/// `=> s = t, !(s = t)`: equality behaves classically.
pub fn derive_eq_classical(s: &Term, t: &Term, lang: Lang) -> Result<Derivation, DeriveError> {
    let st = Formula::Eq(s.clone(), t.clone());
    let nst = Formula::neg(st.clone());
    let explode = derive_eq_explosion(s, t, lang)?;
    let both_neg = Derivation::infer(Rule::ConCp, vec![explode])?; // => !(s=t), !!(s=t)
    Ok(cut_in(
        Formula::neg(nst.clone()),
        both_neg,
        dn_elim(st.clone(), lang)?,
        &[],
        &[nst, st],
    )?)
}

/// Recapture: `=> A, !A` for conditional-free, truth-free `A` built from
/// equalities, bottom and the decidable predicates.
pub fn derive_lem(a: &Formula, lang: Lang) -> Result<Derivation, DeriveError> {
    match a {
        Formula::Tr(_) | Formula::Fals(_) | Formula::P(_) => Err(DeriveError::NotArithmetical),
        Formula::Cond(..) => Err(DeriveError::HasConditional),
        Formula::Eq(s, t) => derive_eq_classical(s, t, lang),
        Formula::Bot => Ok(weaken_to(
            dtop(lang)?,
            &[],
            &[Formula::Bot, Formula::top()],
        )?),
        Formula::Prim(..) => Ok(Derivation::axiom(
            AxiomId::OrdLemma(OrdLemmaId::ClassicalAtom),
            Sequent::new(vec![], vec![a.clone(), Formula::neg(a.clone())], lang),
        )?),
        Formula::Neg(b) => {
            let d = derive_lem(b, lang)?;
            let b = (**b).clone();
            let nb = Formula::neg(b.clone());
            let nnb = Formula::neg(nb.clone());
            Ok(cut_in(b.clone(), d, dn_intro(b, lang)?, &[], &[nb, nnb])?)
        }
        Formula::Or(b, c) => {
            let db = derive_lem(b, lang)?;
            let dc = derive_lem(c, lang)?;
            let b = (**b).clone();
            let c = (**c).clone();
            let dis = Formula::or(b.clone(), c.clone());
            let nb = Formula::neg(b.clone());
            let nc = Formula::neg(c.clone());
            let ndis = Formula::neg(dis.clone());
            // => B | C, !B and => B | C, !C
            let d1 = Derivation::infer(
                Rule::ROr {
                    principal: dis.clone(),
                },
                vec![weaken_to(db, &[], &[b.clone(), c.clone(), nb.clone()])?],
            )?;
            let d2 = Derivation::infer(
                Rule::ROr {
                    principal: dis.clone(),
                },
                vec![weaken_to(dc, &[], &[b.clone(), c.clone(), nc.clone()])?],
            )?;
            // !B, !C => !(B | C)
            let gadget = {
                let lb = cut_in(
                    Formula::neg(nb.clone()),
                    dn_intro(b.clone(), lang)?,
                    did(Formula::neg(nb.clone()), lang)?,
                    &[b.clone()],
                    &[Formula::neg(nb.clone()), Formula::neg(nc.clone())],
                )?;
                let lc = cut_in(
                    Formula::neg(nc.clone()),
                    dn_intro(c.clone(), lang)?,
                    did(Formula::neg(nc.clone()), lang)?,
                    &[c.clone()],
                    &[Formula::neg(nb.clone()), Formula::neg(nc.clone())],
                )?;
                let split = Derivation::infer(
                    Rule::LOr {
                        principal: dis.clone(),
                    },
                    vec![lb, lc],
                )?;
                Derivation::infer(Rule::ConCp, vec![split])?
            };
            let goal = [dis, ndis];
            let inner = cut_in(nc, d2, gadget, &[nb.clone()], &goal)?;
            Ok(cut_in(nb, d1, inner, &[], &goal)?)
        }
        Formula::All(v, b) => {
            let y = fresh_base(a, *v);
            let inst = b.substitute(*v, &Term::Var(y));
            let d_inst = derive_lem(&inst, lang)?;
            let allf = a.clone();
            let nall = Formula::neg(allf.clone());
            let ninst = Formula::neg(inst.clone());
            // !B(y) => !all x B, by contraposing instantiation
            let gadget = contrapose(Derivation::infer(
                Rule::LAll {
                    principal: allf.clone(),
                    witness: Term::Var(y),
                },
                vec![did(inst.clone(), lang)?],
            )?)?;
            // => B(y), !all x B, then bind y
            let pre = cut_in(ninst, d_inst, gadget, &[], &[inst, nall])?;
            Ok(Derivation::infer(
                Rule::RAll {
                    principal: allf,
                    eigen: y,
                },
                vec![pre],
            )?)
        }
    }
}

// ------------------------------------------------------------------
// Progressiveness lifts through the jump

/// Derivation of `Prog(A) => Prog(A+)`.
pub fn derive_prog_jump(body: &Formula, var: u32, lang: Lang) -> Result<Derivation, DeriveError> {
    let jump = gentzen_jump(body, var);
    let ap = &jump.jumped;
    let theta_slot = jump.jumped_var;
    let prog_a = prog(body, var);
    let prog_ap = prog(ap, theta_slot);

    let top = prog_ap
        .all_vars()
        .into_iter()
        .chain(prog_a.all_vars())
        .max()
        .unwrap_or(0);
    let mut fresh = Fresh(top + 1);
    let theta_v = fresh.next();
    let xi_v = fresh.next();
    let eta_v = fresh.next();

    // hypothesis shapes obtained by peeling Prog(A+)
    let (prog_ap_var, prog_ap_guard, _) = destructure_forall_cond(&prog_ap).unwrap();
    let bnd_theta_ap = prog_ap_guard.substitute(prog_ap_var, &Term::Var(theta_v));
    let ap_theta = ap.substitute(theta_slot, &Term::Var(theta_v));
    let (ap_var, ap_guard, ap_body) = destructure_forall_cond(&ap_theta).unwrap();
    let bnd_xi_a = ap_guard.substitute(ap_var, &Term::Var(xi_v));
    let bnd_goal = ap_body.substitute(ap_var, &Term::Var(xi_v));
    let (goal_var, goal_guard, goal_body) = destructure_forall_cond(&bnd_goal).unwrap();
    let hyp_prec = goal_guard.substitute(goal_var, &Term::Var(eta_v));
    let a_eta = goal_body.substitute(goal_var, &Term::Var(eta_v));
    let a_of = |t: &Term| body.substitute(var, t);

    debug_assert_eq!(
        hyp_prec,
        Formula::prec(
            Term::Var(eta_v),
            plus_omega_pow(&Term::Var(xi_v), &Term::Var(theta_v))
        )
    );
    debug_assert_eq!(a_eta, a_of(&Term::Var(eta_v)));

    let gamma = vec![
        prog_a.clone(),
        bnd_theta_ap.clone(),
        bnd_xi_a.clone(),
        hyp_prec.clone(),
    ];
    let succ_goal = vec![a_eta.clone()];

    let theta_zero = Formula::Eq(Term::Var(theta_v), zero_num());
    let theta_pos = Formula::prec(zero_num(), Term::Var(theta_v));

    // ---- case t = 0: the bound collapses to "below xi or equal to xi"
    let case_zero = {
        let mut ctx = gamma.clone();
        ctx.push(theta_zero.clone());
        let split = Formula::or(
            Formula::prec(Term::Var(eta_v), Term::Var(xi_v)),
            Formula::Eq(Term::Var(eta_v), Term::Var(xi_v)),
        );
        let split_leaf = ord_lemma(
            OrdLemmaId::SplitAtZeroExp,
            vec![theta_zero.clone(), hyp_prec.clone()],
            vec![split.clone()],
            lang,
        )?;
        let lt_case = {
            let prec_f = Formula::prec(Term::Var(eta_v), Term::Var(xi_v));
            let mut c = ctx.clone();
            c.push(prec_f.clone());
            use_forall_cond(
                &bnd_xi_a,
                &Term::Var(eta_v),
                did(prec_f, lang)?,
                did(a_eta.clone(), lang)?,
                &c,
                &succ_goal,
            )?
        };
        let eq_case = {
            let eq_f = Formula::Eq(Term::Var(eta_v), Term::Var(xi_v));
            let rev_f = Formula::Eq(Term::Var(xi_v), Term::Var(eta_v));
            let a_xi = a_of(&Term::Var(xi_v));
            let mut c = ctx.clone();
            c.push(eq_f.clone());
            let mut c_rev = c.clone();
            c_rev.push(rev_f.clone());
            // A(xi) from Prog(A) and Bnd(xi, A)
            let get_a_xi = use_forall_cond(
                &prog_a,
                &Term::Var(xi_v),
                did(bnd_xi_a.clone(), lang)?,
                did(a_xi.clone(), lang)?,
                &c_rev,
                &[a_xi.clone()],
            )?;
            // transport along xi = eta
            let rep = drep(rev_f.clone(), a_xi.clone(), a_eta.clone(), lang)?;
            let transported = cut_in(a_xi, get_a_xi, rep, &c_rev, &succ_goal)?;
            // turn eta = xi into xi = eta
            cut_in(
                rev_f,
                sym_eq(Term::Var(eta_v), Term::Var(xi_v), lang)?,
                transported,
                &c,
                &succ_goal,
            )?
        };
        let joined = Derivation::infer(
            Rule::LOr {
                principal: split.clone(),
            },
            vec![lt_case, eq_case],
        )?;
        cut_in(split, split_leaf, joined, &ctx, &succ_goal)?
    };

    // ---- case 0 < t: decompose into finite multiples of a smaller
    // exponent and run induction on the multiplier
    let case_pos = {
        let mut ctx = gamma.clone();
        ctx.push(theta_pos.clone());

        let n_b = fresh.next();
        let z_b = fresh.next();
        let exist = cnf_bound_existential(
            &Term::Var(eta_v),
            &Term::Var(xi_v),
            &Term::Var(theta_v),
            n_b,
            z_b,
        );
        let cnf_leaf = ord_lemma(
            OrdLemmaId::CnfBound,
            vec![theta_pos.clone(), hyp_prec.clone()],
            vec![exist.clone()],
            lang,
        )?;

        let n0 = fresh.next();
        let z0 = fresh.next();
        let ind_var = fresh.next();
        let w_term = Term::fun(FnSym::OPhi, vec![zero_num(), Term::Var(z0)]);
        let m = |x: Term| {
            Term::fun(
                FnSym::OPlus,
                vec![
                    Term::Var(xi_v),
                    Term::fun(FnSym::OTimes, vec![w_term.clone(), x]),
                ],
            )
        };
        let z0_prec = Formula::prec(Term::Var(z0), Term::Var(theta_v));
        let eta_in = Formula::prec(Term::Var(eta_v), m(Term::Var(n0)));

        // the inner binder of the jump template, reused so the induction
        // formula matches the instances of the jump hypothesis exactly
        let eta_j = shared_binder(body, var);
        let b_of = |x: Term| bounded_all(&m(x), body, var, eta_j);

        // induction premise: z0 < t, Bnd(t, A+), B(x) => B(S(x))
        let ind_gamma = vec![z0_prec.clone(), bnd_theta_ap.clone()];
        let ind_premise = {
            let b_x = b_of(Term::Var(ind_var));
            let succ_x = Term::Succ(Box::new(Term::Var(ind_var)));
            let b_sx = b_of(succ_x.clone());
            let zz = fresh.next();
            let prec_s = Formula::prec(Term::Var(zz), m(succ_x.clone()));
            let a_zz = a_of(&Term::Var(zz));
            let shifted = Term::fun(FnSym::OPlus, vec![m(Term::Var(ind_var)), w_term.clone()]);
            let shifted_bnd = bounded_all(&shifted, body, var, eta_j);
            let ap_z0 = ap.substitute(theta_slot, &Term::Var(z0));

            let mut ctx_in = ind_gamma.clone();
            ctx_in.push(b_x.clone());
            ctx_in.push(prec_s.clone());

            // innermost: consume the shifted bound at zz
            let use_shift = {
                let transfer = ord_lemma(
                    OrdLemmaId::PrecMulSucc,
                    vec![prec_s.clone()],
                    vec![Formula::prec(Term::Var(zz), shifted.clone())],
                    lang,
                )?;
                let mut c = ctx_in.clone();
                c.push(shifted_bnd.clone());
                use_forall_cond(
                    &shifted_bnd,
                    &Term::Var(zz),
                    transfer,
                    did(a_zz.clone(), lang)?,
                    &c,
                    &[a_zz.clone()],
                )?
            };
            // apply the jump instance at m(x)
            let use_ap = {
                let mut c = ctx_in.clone();
                c.push(ap_z0.clone());
                use_forall_cond(
                    &ap_z0,
                    &m(Term::Var(ind_var)),
                    did(b_x.clone(), lang)?,
                    use_shift,
                    &c,
                    &[a_zz.clone()],
                )?
            };
            // fetch the jump instance from Bnd(t, A+)
            let use_bnd = use_forall_cond(
                &bnd_theta_ap,
                &Term::Var(z0),
                did(z0_prec.clone(), lang)?,
                use_ap,
                &ctx_in,
                &[a_zz.clone()],
            )?;
            // rebuild B(S(x))
            intro_forall_cond(&b_sx, zz, vec![], use_bnd)?
        };

        // run induction up to the unpacked multiplier
        let ind = Derivation::infer(
            Rule::IndR {
                body: b_of(Term::Var(ind_var)),
                var: ind_var,
                target: Term::Var(n0),
            },
            vec![ind_premise],
        )?;

        // discharge B(0) from Bnd(xi, A)
        let b_zero_bridge = {
            let v2 = fresh.next();
            let prec_m0 = Formula::prec(Term::Var(v2), m(Term::Zero));
            let transfer = ord_lemma(
                OrdLemmaId::PrecMulZero,
                vec![prec_m0.clone()],
                vec![Formula::prec(Term::Var(v2), Term::Var(xi_v))],
                lang,
            )?;
            let a_v2 = a_of(&Term::Var(v2));
            let c = vec![bnd_xi_a.clone(), prec_m0.clone()];
            let inner = use_forall_cond(
                &bnd_xi_a,
                &Term::Var(v2),
                transfer,
                did(a_v2.clone(), lang)?,
                &c,
                &[a_v2.clone()],
            )?;
            intro_forall_cond(&b_of(Term::Zero), v2, vec![], inner)?
        };
        // S2: z0 < t, Bnd(t, A+), Bnd(xi, A) => B(n0)
        let mut s2_ctx = ind_gamma.clone();
        s2_ctx.push(bnd_xi_a.clone());
        let s2 = cut_in(
            b_of(Term::Zero),
            b_zero_bridge,
            ind,
            &s2_ctx,
            &[b_of(Term::Var(n0))],
        )?;

        // use B(n0) at eta
        let mut after_ctx = ctx.clone();
        after_ctx.push(z0_prec.clone());
        after_ctx.push(eta_in.clone());
        let use_bn0 = {
            let b_n0 = b_of(Term::Var(n0));
            let mut c = after_ctx.clone();
            c.push(b_n0.clone());
            use_forall_cond(
                &b_n0,
                &Term::Var(eta_v),
                did(eta_in.clone(), lang)?,
                did(a_eta.clone(), lang)?,
                &c,
                &succ_goal,
            )?
        };
        let d_after = cut_in(b_of(Term::Var(n0)), s2, use_bn0, &after_ctx, &succ_goal)?;

        // unpack the existential witness pair
        let d_land = l_and(z0_prec.clone(), eta_in.clone(), d_after)?;
        let inner_ex_body = match &exist {
            Formula::Neg(a) => match &**a {
                Formula::All(_, b) => match &**b {
                    Formula::Neg(c) => (**c).clone(),
                    _ => unreachable!(),
                },
                _ => unreachable!(),
            },
            _ => unreachable!(),
        };
        let inner_inst = inner_ex_body.substitute(n_b, &Term::Var(n0));
        let inner_body = match &inner_inst {
            Formula::Neg(a) => match &**a {
                Formula::All(_, b) => match &**b {
                    Formula::Neg(c) => (**c).clone(),
                    _ => unreachable!(),
                },
                _ => unreachable!(),
            },
            _ => unreachable!(),
        };
        let d_exz = l_ex(inner_body, z_b, z0, d_land)?;
        let d_exn = l_ex(inner_ex_body, n_b, n0, d_exz)?;
        cut_in(exist, cnf_leaf, d_exn, &ctx, &succ_goal)?
    };

    // ---- combine the cases
    let split = Formula::or(theta_zero, theta_pos);
    let split_leaf = ord_lemma(
        OrdLemmaId::ExpPosSplit,
        vec![hyp_prec.clone()],
        vec![split.clone()],
        lang,
    )?;
    let joined = Derivation::infer(
        Rule::LOr {
            principal: split.clone(),
        },
        vec![case_zero, case_pos],
    )?;
    let core = cut_in(split, split_leaf, joined, &gamma, &succ_goal)?;

    // rebuild the quantifier prefix of Prog(A+)
    let step1 = intro_forall_cond(&bnd_goal, eta_v, vec![], core)?;
    let step2 = {
        let arrow = Derivation::infer(
            Rule::RImp {
                principal: Formula::cond(bnd_xi_a.clone(), bnd_goal.clone()),
                delta: vec![],
            },
            vec![step1],
        )?;
        Derivation::infer(
            Rule::RAll {
                principal: ap_theta.clone(),
                eigen: xi_v,
            },
            vec![arrow],
        )?
    };
    let step3 = intro_forall_cond(&prog_ap, theta_v, vec![], step2)?;
    debug_assert_eq!(
        step3.conclusion,
        Sequent::new(vec![prog_a], vec![prog_ap], lang)
    );
    Ok(step3)
}

/// Derivation of `Prog(A) => all x (x < w_n -> A(x))`.
pub fn derive_ti(body: &Formula, var: u32, n: u32, lang: Lang) -> Result<Derivation, DeriveError> {
    if n > 3 {
        return Err(DeriveError::SizeGuard(n));
    }
    derive_ti_inner(body, var, n, lang)
}

fn derive_ti_inner(
    body: &Formula,
    var: u32,
    n: u32,
    lang: Lang,
) -> Result<Derivation, DeriveError> {
    let prog_a = prog(body, var);
    let zeta = shared_binder(body, var);
    let bound = Term::Num(Ordinal::omega_tower(n).code());
    let goal = bounded_all(&bound, body, var, zeta);
    let mut fresh = Fresh(prog_a.all_vars().into_iter().max().map_or(0, |m| m + 1));

    if n == 0 {
        // below 1 everything is 0, and nothing lies below 0
        let xv = fresh.next();
        let prec_one = Formula::prec(Term::Var(xv), one_num());
        let a_x = body.substitute(var, &Term::Var(xv));
        let eq_zero = Formula::Eq(Term::Var(xv), zero_num());
        let below_one = ord_lemma(
            OrdLemmaId::BelowOneIsZero,
            vec![prec_one.clone()],
            vec![eq_zero.clone()],
            lang,
        )?;
        let ctx = vec![prog_a.clone(), prec_one.clone()];
        let with_eq = {
            let mut c = ctx.clone();
            c.push(eq_zero.clone());
            let guard = {
                let (pv, pg, _) = destructure_forall_cond(&prog_a).unwrap();
                pg.substitute(pv, &Term::Var(xv))
            };
            let guard_d = {
                let z2 = fresh.next();
                let prec_zx = Formula::prec(Term::Var(z2), Term::Var(xv));
                let prec_z0 = Formula::prec(Term::Var(z2), zero_num());
                let a_z2 = body.substitute(var, &Term::Var(z2));
                let rep = drep(eq_zero.clone(), prec_zx.clone(), prec_z0.clone(), lang)?;
                let refute =
                    ord_lemma(OrdLemmaId::NoBelowZero, vec![prec_z0.clone()], vec![], lang)?;
                let mut inner_ctx = c.clone();
                inner_ctx.push(prec_zx);
                let inner = cut_in(prec_z0, rep, refute, &inner_ctx, &[a_z2])?;
                intro_forall_cond(&guard, z2, vec![a_x.clone()], inner)?
            };
            use_forall_cond(
                &prog_a,
                &Term::Var(xv),
                guard_d,
                did(a_x.clone(), lang)?,
                &c,
                &[a_x.clone()],
            )?
        };
        let core = cut_in(eq_zero, below_one, with_eq, &ctx, &[a_x])?;
        let closed = intro_forall_cond(&goal, xv, vec![], core)?;
        debug_assert_eq!(
            closed.conclusion,
            Sequent::new(vec![prog_a], vec![goal], lang)
        );
        return Ok(closed);
    }

    // lift: transfinite induction for the jumped formula one tower level
    // down yields it for the source formula at this level
    let jump = gentzen_jump(body, var);
    let ap = &jump.jumped;
    let theta_slot = jump.jumped_var;
    let prog_ap = prog(ap, theta_slot);
    let d_prev = derive_ti_inner(ap, theta_slot, n - 1, lang)?;
    let d_pj = derive_prog_jump(body, var, lang)?;

    let alpha_num = Term::Num(Ordinal::omega_tower(n - 1).code());
    let ap_alpha = ap.substitute(theta_slot, &alpha_num);

    // Prog(A+) => A+(alpha), using the previous level as the guard proof
    let step2 = use_forall_cond(
        &prog_ap,
        &alpha_num,
        d_prev,
        did(ap_alpha.clone(), lang)?,
        &[prog_ap.clone()],
        &[ap_alpha.clone()],
    )?;
    // Prog(A) => A+(alpha)
    let step3 = cut_in(
        prog_ap,
        d_pj,
        step2,
        &[prog_a.clone()],
        &[ap_alpha.clone()],
    )?;

    // instantiate A+(alpha) at 0 and align the bound with the tower numeral
    let eta_j = shared_binder(body, var);
    let step4 = {
        let ctx = vec![ap_alpha.clone(), prog_a.clone()];
        let (av, ag, _) = destructure_forall_cond(&ap_alpha).unwrap();
        let guard = ag.substitute(av, &zero_num());
        let guard_d = {
            let z3 = fresh.next();
            let prec_z0 = Formula::prec(Term::Var(z3), zero_num());
            let a_z3 = body.substitute(var, &Term::Var(z3));
            let refute = ord_lemma(OrdLemmaId::NoBelowZero, vec![prec_z0.clone()], vec![], lang)?;
            let mut inner_ctx = ctx.clone();
            inner_ctx.push(prec_z0);
            let inner = weaken_to(refute, &inner_ctx, &[a_z3])?;
            intro_forall_cond(&guard, z3, vec![goal.clone()], inner)?
        };
        let shifted = plus_omega_pow(&zero_num(), &alpha_num);
        let shifted_bnd = bounded_all(&shifted, body, var, eta_j);
        let cont = {
            let z4 = fresh.next();
            let prec_goal = Formula::prec(Term::Var(z4), bound.clone());
            let prec_shift = Formula::prec(Term::Var(z4), shifted.clone());
            let a_z4 = body.substitute(var, &Term::Var(z4));
            let eq = Formula::Eq(bound.clone(), shifted.clone());
            let comp = Derivation::axiom(
                AxiomId::Comp,
                Sequent::new(vec![], vec![eq.clone()], lang),
            )?;
            let rep = drep(eq.clone(), prec_goal.clone(), prec_shift.clone(), lang)?;
            let transfer = cut_in(eq, comp, rep, &[prec_goal.clone()], &[prec_shift])?;
            let mut c = ctx.clone();
            c.push(shifted_bnd.clone());
            c.push(prec_goal);
            let inner = use_forall_cond(
                &shifted_bnd,
                &Term::Var(z4),
                transfer,
                did(a_z4.clone(), lang)?,
                &c,
                &[a_z4],
            )?;
            intro_forall_cond(&goal, z4, vec![], inner)?
        };
        use_forall_cond(&ap_alpha, &zero_num(), guard_d, cont, &ctx, &[goal.clone()])?
    };
    let root = cut_in(ap_alpha, step3, step4, &[prog_a.clone()], &[goal.clone()])?;
    debug_assert_eq!(root.conclusion, Sequent::new(vec![prog_a], vec![goal], lang));
    Ok(root)
}

// ------------------------------------------------------------------
// The hierarchy over the Veblen jump

/// Codes of one stage of the jump hierarchy: the stage formula and, above
/// zero, the paired selector it consults.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FHierarchyCode {
    pub index: Ordinal,
    pub code_f: Code,
    pub code_fsup: Option<Code>,
}

// fixed variable layout of the hierarchy formulas
const HX: u32 = 0; // argument
const HZ: u32 = 1; // stage index (master only)
const HD: u32 = 2; // self slot (pre-master only)
const HW: u32 = 3; // interval variable
const HA: u32 = 4; // jump pattern: bound
const HB: u32 = 5; // jump pattern: element

fn num_of(t: Term) -> Term {
    Term::fun(FnSym::NumF, vec![t])
}

fn sub_of(a: Term, b: Term, c: Term) -> Term {
    Term::fun(FnSym::Sub, vec![a, b, c])
}

fn var_code(v: u32) -> Term {
    Term::Num(encode_term(&Term::Var(v)))
}

/// `lower <= w & w < upper` as a guard on the interval variable.
fn interval_guard(lower: Term, upper: Term, w: u32) -> Formula {
    Formula::and(
        Formula::or(
            Formula::prec(lower.clone(), Term::Var(w)),
            Formula::Eq(lower, Term::Var(w)),
        ),
        Formula::prec(Term::Var(w), upper),
    )
}

/// The jump pattern applied to a consultation predicate.
fn jump_of(consult: impl Fn(Term) -> Formula, step: Term, a: u32, b: u32) -> Formula {
    Formula::all(
        a,
        Formula::cond(
            Formula::all(
                b,
                Formula::cond(
                    Formula::prec(Term::Var(b), Term::Var(a)),
                    consult(Term::Var(b)),
                ),
            ),
            Formula::all(
                b,
                Formula::cond(
                    Formula::prec(
                        Term::Var(b),
                        Term::fun(FnSym::OPlus, vec![Term::Var(a), step.clone()]),
                    ),
                    consult(Term::Var(b)),
                ),
            ),
        ),
    )
}

/// The self-referential master formula: one code whose instances at stage
/// indices behave like hierarchy stages. Built with the usual substitution
/// diagonal, so the fixed-point code is computed rather than postulated.
pub fn master_code() -> &'static Code {
    static CELL: OnceLock<Code> = OnceLock::new();
    CELL.get_or_init(|| {
        let selft = sub_of(Term::Var(HD), var_code(HD), num_of(Term::Var(HD)));
        let msel = |w: Term| sub_of(selft.clone(), var_code(HZ), num_of(w));
        let consult = |b: Term| {
            Formula::Tr(sub_of(msel(Term::Var(HW)), var_code(HX), num_of(b)))
        };
        let step = Term::fun(
            FnSym::OPhi,
            vec![
                Term::fun(FnSym::OLast, vec![Term::Var(HZ)]),
                Term::Var(HX),
            ],
        );
        let jall = Formula::all(
            HW,
            Formula::cond(
                interval_guard(
                    Term::fun(FnSym::OHead, vec![Term::Var(HZ)]),
                    Term::Var(HZ),
                    HW,
                ),
                jump_of(consult, step, HA, HB),
            ),
        );
        let pre_master = Formula::or(
            Formula::and(
                Formula::Eq(Term::Var(HZ), zero_num()),
                Formula::P(Term::Var(HX)),
            ),
            Formula::and(Formula::prec(zero_num(), Term::Var(HZ)), jall),
        );
        let c0 = encode_formula(&pre_master);
        let master = pre_master.substitute(HD, &Term::Num(c0));
        encode_formula(&master)
    })
}

/// Builds the stage codes at `index`.
///
/// Stage zero is the schematic atom applied to the argument slot. Above zero
/// the stage formula is the Veblen jump shape consulting the paired
/// selector; the selector mentions the previous stage code directly at
/// successors and falls back to the self-referential master at limits.
pub fn build_f(index: &Ordinal) -> FHierarchyCode {
    if index.is_zero() {
        return FHierarchyCode {
            index: index.clone(),
            code_f: encode_formula(&Formula::P(Term::Var(HX))),
            code_fsup: None,
        };
    }
    let idx_num = Term::Num(index.code());
    let p1 = Term::fun(FnSym::Proj1, vec![Term::Var(HX)]);
    let p2 = Term::fun(FnSym::Proj2, vec![Term::Var(HX)]);
    let selector_body = match index.classify() {
        OrdClass::Successor(pred) => {
            let prev = build_f(&pred);
            Formula::Tr(sub_of(Term::Num(prev.code_f), var_code(HX), num_of(p2.clone())))
        }
        _ => {
            let msel = sub_of(
                Term::Num(master_code().clone()),
                var_code(HZ),
                num_of(p1.clone()),
            );
            Formula::Tr(sub_of(msel, var_code(HX), num_of(p2.clone())))
        }
    };
    let fsup = Formula::and(Formula::prec(p1, idx_num.clone()), selector_body);
    let fsup_code = encode_formula(&fsup);

    let consult = |b: Term| {
        Formula::Tr(sub_of(
            Term::Num(fsup_code.clone()),
            var_code(HX),
            num_of(Term::fun(FnSym::Pair, vec![Term::Var(HW), b])),
        ))
    };
    let step = Term::fun(FnSym::OPhi, vec![Term::Num(index.e_of().code()), Term::Var(HX)]);
    let stage = Formula::all(
        HW,
        Formula::cond(
            interval_guard(Term::Num(index.h_of().code()), idx_num, HW),
            jump_of(consult, step, HA, HB),
        ),
    );
    FHierarchyCode {
        index: index.clone(),
        code_f: encode_formula(&stage),
        code_fsup: Some(fsup_code),
    }
}

/// The Veblen jump template at a concrete positive notation, with the stated
/// parameter variable; the head and last-exponent slots are computed from
/// the notation.
pub fn veblen_jump(xi: &Ordinal, param: u32) -> Result<Formula, DeriveError> {
    if xi.is_zero() {
        return Err(DeriveError::ZeroOrdinal);
    }
    let stage = build_f(xi);
    let fsup_code = stage.code_fsup.unwrap();
    let (w, a, b) = (param + 1, param + 2, param + 3);
    let consult = |bt: Term| {
        Formula::Tr(sub_of(
            Term::Num(fsup_code.clone()),
            var_code(HX),
            num_of(Term::fun(FnSym::Pair, vec![Term::Var(w), bt])),
        ))
    };
    let step = Term::fun(
        FnSym::OPhi,
        vec![Term::Num(xi.e_of().code()), Term::Var(param)],
    );
    Ok(Formula::all(
        w,
        Formula::cond(
            interval_guard(Term::Num(xi.h_of().code()), Term::Num(xi.code()), w),
            jump_of(consult, step, a, b),
        ),
    ))
}

/// Numeral payloads embedded anywhere in a formula; used to audit which
/// stage codes a hierarchy formula mentions.
pub fn embedded_numerals(f: &Formula) -> Vec<Code> {
    fn term(t: &Term, out: &mut Vec<Code>) {
        match t {
            Term::Num(n) => out.push(n.clone()),
            Term::Var(_) | Term::Zero => {}
            Term::Succ(a) => term(a, out),
            Term::Plus(a, b) | Term::Times(a, b) => {
                term(a, out);
                term(b, out);
            }
            Term::Fn(_, args) => args.iter().for_each(|a| term(a, out)),
        }
    }
    fn go(f: &Formula, out: &mut Vec<Code>) {
        match f {
            Formula::Bot => {}
            Formula::Eq(s, t) => {
                term(s, out);
                term(t, out);
            }
            Formula::Tr(t) | Formula::Fals(t) | Formula::P(t) => term(t, out),
            Formula::Prim(_, args) => args.iter().for_each(|t| term(t, out)),
            Formula::Neg(a) | Formula::All(_, a) => go(a, out),
            Formula::Or(a, b) | Formula::Cond(a, b) => {
                go(a, out);
                go(b, out);
            }
        }
    }
    let mut out = Vec::new();
    go(f, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::decode_formula;
    use crate::eval::eval_term;
    use crate::kernel::{check, System};

    fn assert_checks(d: &Derivation, sys: System) {
        let r = check(d, sys);
        assert!(r.ok, "{r}");
    }

    #[test]
    fn basics() {
        let a = Formula::Eq(Term::Zero, Term::Zero);
        assert_checks(
            &derive_basic(BasicGoal::Top, Lang::LN).unwrap(),
            System::G1h,
        );
        assert_checks(
            &derive_basic(BasicGoal::DnIntro(a.clone()), Lang::LN).unwrap(),
            System::G1h,
        );
        assert_checks(
            &derive_basic(BasicGoal::DnElim(a), Lang::LN).unwrap(),
            System::G1h,
        );
    }

    #[test]
    fn eq_classical() {
        let d = derive_eq_classical(&Term::Var(0), &Term::Var(1), Lang::LN).unwrap();
        let st = Formula::Eq(Term::Var(0), Term::Var(1));
        assert_eq!(
            d.conclusion,
            Sequent::new(vec![], vec![st.clone(), Formula::neg(st)], Lang::LN)
        );
        assert_checks(&d, System::G1hEq);
    }

    #[test]
    fn lem_examples() {
        let zero_eq = Formula::Eq(Term::Zero, Term::Zero);
        let d = derive_lem(&zero_eq, Lang::LN).unwrap();
        assert_checks(&d, System::G1hEq);

        let forall = Formula::all(0, Formula::Eq(Term::Var(0), Term::Var(0)));
        let d2 = derive_lem(&forall, Lang::LN).unwrap();
        assert_eq!(
            d2.conclusion,
            Sequent::new(
                vec![],
                vec![forall.clone(), Formula::neg(forall)],
                Lang::LN
            )
        );
        assert_checks(&d2, System::G1hEq);

        let tr = Formula::Tr(Term::Zero);
        assert!(matches!(
            derive_lem(&tr, Lang::LT),
            Err(DeriveError::NotArithmetical)
        ));
    }

    #[test]
    fn jump_shape() {
        // A(h) with a distinguished variable; the jump must strictly grow
        let a = Formula::prec(Term::Var(0), Term::Num(Ordinal::omega().code()));
        let j = gentzen_jump(&a, 0);
        assert!(j.jumped.rank() > a.rank());
        let k = gentzen_jump(&j.jumped, j.jumped_var);
        assert!(k.jumped.rank() > j.jumped.rank());
        // injective on distinct sources
        let b = Formula::prec(Term::Var(0), Term::Num(Ordinal::one().code()));
        assert_ne!(gentzen_jump(&b, 0).jumped, j.jumped);
    }

    #[test]
    fn prog_jump_checks() {
        let a = Formula::Eq(Term::Var(0), Term::Var(0));
        let d = derive_prog_jump(&a, 0, Lang::LNArrow).unwrap();
        let jump = gentzen_jump(&a, 0);
        assert_eq!(
            d.conclusion,
            Sequent::new(
                vec![prog(&a, 0)],
                vec![prog(&jump.jumped, jump.jumped_var)],
                Lang::LNArrow
            )
        );
        assert_checks(&d, System::Hya);
    }

    #[test]
    fn prog_jump_mutation_rejected() {
        let a = Formula::Eq(Term::Var(0), Term::Var(0));
        let mut d = derive_prog_jump(&a, 0, Lang::LNArrow).unwrap();
        // swap the conclusion with one of its premises
        let premise = d.premises[0].conclusion.clone();
        d.conclusion = premise;
        let r = check(&d, System::Hya);
        assert!(!r.ok);
        assert!(r.failure.is_some());
    }

    #[test]
    fn ti_towers_check() {
        let a = Formula::Eq(Term::Var(0), Term::Var(0));
        let mut sizes = Vec::new();
        for n in 0..=2 {
            let d = derive_ti(&a, 0, n, Lang::LNArrow).unwrap();
            let goal = bounded_all(
                &Term::Num(Ordinal::omega_tower(n).code()),
                &a,
                0,
                shared_binder(&a, 0),
            );
            assert_eq!(
                d.conclusion,
                Sequent::new(vec![prog(&a, 0)], vec![goal], Lang::LNArrow)
            );
            assert_checks(&d, System::Hya);
            sizes.push(d.node_count());
        }
        assert!(sizes[0] < sizes[1] && sizes[1] < sizes[2], "{sizes:?}");
        assert!(matches!(
            derive_ti(&a, 0, 4, Lang::LNArrow),
            Err(DeriveError::SizeGuard(4))
        ));
    }

    #[test]
    fn hierarchy_codes() {
        // stage zero decodes to the schematic atom with the argument slot
        let f0 = build_f(&Ordinal::zero());
        assert_eq!(
            decode_formula(&f0.code_f).unwrap(),
            Formula::P(Term::Var(0))
        );
        // stage one: jump shape over the singleton interval [0, 1)
        let f1 = build_f(&Ordinal::one());
        let dec = decode_formula(&f1.code_f).unwrap();
        assert_eq!(encode_formula(&dec), f1.code_f);
        match &dec {
            Formula::All(_, _) => {}
            other => panic!("stage one is not a jump shape: {other}"),
        }
        // the selector mentions the previous stage code
        let sup = decode_formula(f1.code_fsup.as_ref().unwrap()).unwrap();
        assert!(embedded_numerals(&sup).contains(&f0.code_f));
        // well-foundedness of mentions on a small sample
        let omega = Ordinal::omega();
        let samples = [
            Ordinal::one(),
            Ordinal::from_nat(2),
            omega.clone(),
            omega.add(&Ordinal::one()),
            omega.times_nat(2),
            Ordinal::omega_pow(&Ordinal::from_nat(2)),
        ];
        let codes: Vec<(Ordinal, Code)> =
            samples.iter().map(|o| (o.clone(), build_f(o).code_f)).collect();
        for o in &samples {
            let fc = build_f(o);
            let mut mentioned = embedded_numerals(&decode_formula(&fc.code_f).unwrap());
            if let Some(sup) = &fc.code_fsup {
                mentioned.extend(embedded_numerals(&decode_formula(sup).unwrap()));
            }
            for (other, code) in &codes {
                if mentioned.contains(code) {
                    assert!(other.lt(o), "stage {o} mentions stage {other}");
                }
            }
        }
    }

    #[test]
    fn master_self_reference() {
        // evaluating the selector at an index yields the master instance
        let mc = master_code();
        let master = decode_formula(mc).unwrap();
        let idx = Ordinal::omega().code();
        let sel = sub_of(
            sub_of(
                Term::Num(mc.clone()),
                var_code(HZ),
                num_of(Term::Num(idx.clone())),
            ),
            var_code(HX),
            num_of(Term::num_u64(7)),
        );
        let applied = eval_term(&sel).unwrap();
        let expect = master
            .substitute(HZ, &Term::Num(idx))
            .substitute(HX, &Term::num_u64(7));
        assert_eq!(applied, encode_formula(&expect));
    }

    #[test]
    fn veblen_jump_slots() {
        let xi = Ordinal::omega_pow(&Ordinal::omega());
        let f = veblen_jump(&xi, 9).unwrap();
        // h-slot 0 and e-slot omega appear as numerals
        let nums = embedded_numerals(&f);
        assert!(nums.contains(&Ordinal::zero().code()));
        assert!(nums.contains(&Ordinal::omega().code()));
        assert!(veblen_jump(&Ordinal::zero(), 0).is_err());
    }
}
