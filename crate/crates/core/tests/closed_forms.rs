use worldlens_core::agents::family_optimal_agent;
use worldlens_core::goal::{make_family, words_with_weight, FamilyKind, Goal, SequentialGoal, Triple};
use worldlens_core::mdp::builtin::{make_chain_world, LEFT, ORIGIN, RIGHT};
use worldlens_core::prob::{exact_success_prob, family_value, optimal_success_prob};

const PROBE: Triple = Triple { state: ORIGIN, action: RIGHT, next: 3 };

fn kinds(n: usize) -> Vec<FamilyKind> {
    let mut out = Vec::new();
    for r in 0..=n {
        for word in words_with_weight(n, r) {
            out.push(FamilyKind::PhiW { marker: LEFT, word });
        }
        out.push(FamilyKind::Rho { marker: RIGHT, n, r });
    }
    for k in -1..=n as i64 {
        out.push(FamilyKind::PsiLe { marker: LEFT, n, k });
        out.push(FamilyKind::ChiGt { marker: RIGHT, n, k });
        out.push(FamilyKind::XiK { a: LEFT, b: RIGHT, n, k });
    }
    for r in 0..=n {
        out.push(FamilyKind::XiRs { a: LEFT, b: RIGHT, r, s: n, complement: false });
        out.push(FamilyKind::XiRs { a: LEFT, b: RIGHT, r: n, s: r, complement: true });
    }
    out
}

#[test]
fn closed_form_matches_solvers() {
    for (p_r, p_l) in [(0.2, 0.8), (0.5, 0.5), (0.8, 0.2)] {
        let w = make_chain_world(p_r, p_l).unwrap();
        let agent = family_optimal_agent(&w);
        for n in 1..=3 {
            for kind in kinds(n) {
                let family = make_family(PROBE, kind.clone(), 2).unwrap();
                let closed = family_value(&kind, p_r);
                let goal = Goal::Family(family.clone());
                let policy = agent.policy_for(&family).unwrap();
                let solved = exact_success_prob(&w, &policy, &goal, ORIGIN).unwrap().value;
                let optimum = optimal_success_prob(&w, &goal, ORIGIN).unwrap().value.value;
                assert!((closed - solved).abs() <= 1e-9, "{kind:?} p={p_r}: {closed} vs {solved}");
                assert!((closed - optimum).abs() <= 1e-9, "{kind:?} p={p_r}: {closed} vs {optimum}");
            }
        }
    }
}

#[test]
fn disjoint_words_add() {
    let w = make_chain_world(0.35, 0.5).unwrap();
    let agent = family_optimal_agent(&w);
    for n in 1..=3 {
        let words: Vec<Vec<bool>> = (0..=n).flat_map(|r| words_with_weight(n, r)).collect();
        for (i, u) in words.iter().enumerate() {
            for v in &words[i + 1..] {
                let fu = make_family(PROBE, FamilyKind::PhiW { marker: LEFT, word: u.clone() }, 2).unwrap();
                let fv = make_family(PROBE, FamilyKind::PhiW { marker: LEFT, word: v.clone() }, 2).unwrap();
                let policy = agent.policy_for(&fu).unwrap();
                let value = |g: &Goal| exact_success_prob(&w, &policy, g, ORIGIN).unwrap().value;
                let mut parts: Vec<SequentialGoal> = fu.materialize().unwrap();
                parts.extend(fv.materialize().unwrap());
                let both = Goal::Disjunction(parts);
                let sum = value(&Goal::Family(fu)) + value(&Goal::Family(fv));
                assert!((value(&both) - sum).abs() <= 1e-12);
            }
        }
    }
}
