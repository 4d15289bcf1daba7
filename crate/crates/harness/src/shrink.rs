//! Greedy shrinking of failing samples. Candidates must still type-check
//! before the failure predicate is consulted.

use cctrack_core::{Binding, Checker, Context, Term};

use crate::gen::Sample;

/// Repeatedly replaces the sample by a smaller well-typed one on which
/// `fails` still holds.
pub fn shrink(sample: &Sample, checker: &Checker, fails: impl Fn(&Sample) -> bool) -> Sample {
    let mut best = sample.clone();
    loop {
        let mut improved = false;
        for cand in candidates(&best, checker) {
            if fails(&cand) {
                best = cand;
                improved = true;
                break;
            }
        }
        if !improved {
            return best;
        }
    }
}

fn candidates(s: &Sample, checker: &Checker) -> Vec<Sample> {
    let mut terms: Vec<Term> = Vec::new();
    s.term.visit(&mut |t| {
        if t.size() < s.term.size() {
            terms.push(t.clone());
        }
    });
    terms.sort_by_key(Term::size);
    terms.dedup();
    let mut out: Vec<Sample> = terms
        .into_iter()
        .filter_map(|t| retype(s, s.context.clone(), t, checker))
        .collect();
    // Dropping a trailing binding the term does not mention.
    let bindings = s.context.bindings();
    if let Some(last) = bindings.last() {
        let used = s.term.free_names().contains_any(last.name());
        if !used {
            let mut ctx = Context::new();
            for b in &bindings[..bindings.len() - 1] {
                match b {
                    Binding::Term(x, t) => ctx.push_term(x.clone(), t.clone()),
                    Binding::Type(x, t) => ctx.push_type(x.clone(), t.clone()),
                }
            }
            out.extend(retype(s, ctx, s.term.clone(), checker));
        }
    }
    out
}

fn retype(s: &Sample, ctx: Context, term: Term, checker: &Checker) -> Option<Sample> {
    checker.check_context(&ctx).ok()?;
    let ty = checker.synth(&ctx, &term).ok()?;
    Some(Sample {
        seed: s.seed,
        context: ctx,
        term,
        ty,
        extensions: s.extensions,
    })
}
