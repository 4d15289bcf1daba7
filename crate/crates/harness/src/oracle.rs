//! Checks on evaluator states that do not reuse the evaluator's own
//! context-splitting code.

use cctrack_core::eval::{MachineState, Mutation, StepResult};
use cctrack_core::{Extensions, Name, Term};

fn value(t: &Term, ext: Extensions) -> bool {
    match t {
        Term::Abs { .. } | Term::TAbs { .. } => true,
        Term::Var(_) => ext.returns || ext.regions || ext.effects,
        Term::Ptr { .. } => ext.regions,
        _ => false,
    }
}

/// Whether `t` itself is a redex, ignoring whether the surrounding context
/// makes it reducible.
fn is_redex(t: &Term, ext: Extensions, entered: &dyn Fn(&Name) -> bool) -> bool {
    let v = |t: &Term| value(t, ext);
    match t {
        Term::App(f, a) => matches!(**f, Term::Abs { .. }) && v(a),
        Term::TApp(f, _) => matches!(**f, Term::TAbs { .. }),
        Term::Handle { body, .. } => v(body),
        Term::Return { cap, value } => matches!(**cap, Term::Var(_)) && v(value),
        Term::Region { handle, body } => !entered(handle) || v(body),
        Term::New { init, .. } => v(init),
        Term::Deref(inner) => matches!(**inner, Term::Ptr { .. }),
        Term::HandleEff { body, .. } => v(body),
        Term::Do { arg, .. } => v(arg),
        Term::Var(_) | Term::Abs { .. } | Term::TAbs { .. } | Term::Ptr { .. } => false,
    }
}

/// Counts the ways `t` splits into an evaluation context around a redex,
/// exploring every position the context grammar allows.
pub fn count_decompositions(t: &Term, ext: Extensions, entered: &dyn Fn(&Name) -> bool) -> usize {
    let here = usize::from(is_redex(t, ext, entered));
    let v = |t: &Term| value(t, ext);
    let inner = match t {
        Term::App(f, a) => {
            count_decompositions(f, ext, entered)
                + if v(f) {
                    count_decompositions(a, ext, entered)
                } else {
                    0
                }
        }
        Term::TApp(f, _) => count_decompositions(f, ext, entered),
        Term::Handle { body, .. } | Term::HandleEff { body, .. } => {
            count_decompositions(body, ext, entered)
        }
        Term::Return { cap, value } => {
            count_decompositions(cap, ext, entered)
                + if v(cap) {
                    count_decompositions(value, ext, entered)
                } else {
                    0
                }
        }
        Term::Region { handle, body } => {
            if entered(handle) {
                count_decompositions(body, ext, entered)
            } else {
                0
            }
        }
        Term::New { init, .. } => count_decompositions(init, ext, entered),
        Term::Deref(inner) => count_decompositions(inner, ext, entered),
        Term::Do { arg, .. } => count_decompositions(arg, ext, entered),
        Term::Var(_) | Term::Abs { .. } | Term::TAbs { .. } | Term::Ptr { .. } => 0,
    };
    here + inner
}

/// Decomposition count for a machine state, treating regions with a live
/// store frame as entered.
pub fn state_decompositions(state: &MachineState) -> usize {
    let live = |n: &Name| state.store.iter().any(|f| &f.name == n && f.live);
    count_decompositions(&state.term, state.extensions, &live)
}

/// If the state's redex is a beta-v redex `(\(x: T) t) v` with `x` not
/// occurring in `v`, contracts it and reports whether `x` survives anywhere
/// in the result, including capture sets. `None` if not applicable.
pub fn beta_residual(state: &MachineState, mutation: Option<Mutation>) -> Option<bool> {
    let (_, redex) = state.decompose()?;
    let Term::App(f, a) = &redex else { return None };
    let Term::Abs { param, .. } = &**f else {
        return None;
    };
    if a.free_names().contains_any(param) {
        return None;
    }
    let alone = MachineState::new(redex.clone(), state.extensions).with_mutation(mutation);
    match alone.step() {
        StepResult::Stepped(next) => Some(next.term.free_names().contains_any(param)),
        _ => None,
    }
}
