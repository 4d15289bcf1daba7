//! Erasure and embedding checks against the System F<: oracle.

use cctrack_core::fsub::{
    embed_term, embed_type, erase_term, erase_type, fsub_check, fsub_subtype, FsubBinding,
    FsubContext,
};
use cctrack_core::{Binding, CaptureSet, Checker, Context};

use crate::gen::Sample;
use crate::soundness::{Clause, Violation};

fn erase_context(ctx: &Context) -> Result<FsubContext, String> {
    let mut out = FsubContext::default();
    for b in ctx.bindings() {
        out = match b {
            Binding::Term(x, t) => {
                out.with_term(x.clone(), erase_type(t).map_err(|e| e.to_string())?)
            }
            Binding::Type(x, t) => {
                out.with_type(x.clone(), erase_type(t).map_err(|e| e.to_string())?)
            }
        };
    }
    Ok(out)
}

fn embed_context(ctx: &FsubContext, c: &CaptureSet) -> Result<Context, String> {
    let mut out = Context::new();
    for b in &ctx.bindings {
        match b {
            FsubBinding::Term(x, t) => {
                out.push_term(x.clone(), embed_type(t, c).map_err(|e| e.to_string())?)
            }
            FsubBinding::Type(x, t) => {
                out.push_type(x.clone(), embed_type(t, c).map_err(|e| e.to_string())?)
            }
        }
    }
    Ok(out)
}

/// For a core sample: the erased program checks in F<: at the erased type,
/// and embedding the erased program with `{}` and `{*}` checks again.
/// Samples using extensions are skipped and yield `None`.
pub fn check(sample: &Sample, checker: &Checker) -> Option<Vec<Violation>> {
    if sample.term.extensions_used().any() {
        return None;
    }
    let mut out = Vec::new();
    let fail = |clause, detail: String| Violation { clause, detail };

    let erased = (|| {
        let ctx = erase_context(&sample.context)?;
        let term = erase_term(&sample.term).map_err(|e| e.to_string())?;
        let expected = erase_type(&sample.ty).map_err(|e| e.to_string())?;
        let found = fsub_check(&ctx, &term).map_err(|e| e.to_string())?;
        let same = fsub_subtype(&ctx, &found, &expected).map_err(|e| e.to_string())?
            && fsub_subtype(&ctx, &expected, &found).map_err(|e| e.to_string())?;
        if !same {
            return Err(format!(
                "F<: type {found} differs from erased type {expected}"
            ));
        }
        Ok((ctx, term))
    })();
    let (fctx, fterm) = match erased {
        Ok(x) => x,
        Err(e) => {
            out.push(fail(Clause::Erasure, e));
            return Some(out);
        }
    };

    for c in [CaptureSet::empty(), CaptureSet::Universal] {
        let result = (|| {
            let ctx = embed_context(&fctx, &c)?;
            let term = embed_term(&fterm, &c).map_err(|e| e.to_string())?;
            checker.check_context(&ctx).map_err(|e| e.to_string())?;
            checker.synth(&ctx, &term).map_err(|e| e.to_string())?;
            if erase_term(&term).ok().as_ref() != Some(&fterm) {
                return Err("erasing the embedding does not give back the term".to_string());
            }
            Ok(())
        })();
        if let Err(e) = result {
            out.push(fail(Clause::Embedding, format!("with {c}: {e}")));
        }
    }
    Some(out)
}
