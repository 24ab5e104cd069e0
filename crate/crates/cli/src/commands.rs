//! One function per subcommand. Each returns whether every assertion held.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};
use xrh_core::construct::family::{family_generate, odd_family_exact, FamilyId, FamilyParams};
use xrh_core::construct::{assemble_f, construct_h_counted};
use xrh_core::criterion::{check_conditions, Witness};
use xrh_core::ff::{CtxOptions, FieldCtx, Fq, Fq2, ModulusSpec};
use xrh_core::oracle::{check_xr_h_poly, Failure};
use xrh_core::poly::LaurentPoly;
use xrh_core::reduce::reduce_h;
use xrh_core::search::sweep::fields_up_to;
use xrh_core::search::{
    classify_linearized, known_entries, search_monomial_even, search_monomial_odd, verify_family_sweep, verify_known,
    SearchError, SearchResult, SweepOptions,
};

use crate::output::{Emitter, Format, Printer};
use crate::{Command, Global, ParamArgs};

pub fn run(g: &Global, cmd: &Command) -> Result<bool> {
    if let Some(jobs) = g.jobs {
        if jobs == 0 {
            bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let opts = ctx_options(g)?;
    let default_format = match cmd {
        Command::ReproduceTables { .. } | Command::Search { linearized: false, .. } => Format::Csv,
        Command::Reduce { .. } => Format::Text,
        _ => Format::Json,
    };
    let mut out = Emitter::new(g.format.unwrap_or(default_format));
    let ok = match cmd {
        Command::Verify { h, r, oracle } => verify(g, &opts, &mut out, h, *r, *oracle)?,
        Command::Reduce { h } => reduce(g, &opts, &mut out, h)?,
        Command::Construct { h1, h2, r, paper_form, oracle } => {
            construct(g, &opts, &mut out, h1, h2, *r, *paper_form, *oracle)?
        }
        Command::Family { family: fam, params, oracle } => family(g, &opts, &mut out, *fam, params, *oracle)?,
        Command::ReproduceTables { kmin, kmax, include_frobenius, golden } => {
            let p = g.p.ok_or_else(|| anyhow!("--p is required"))?;
            let results = (*kmin..=*kmax)
                .map(|k| monomial_search(&field(p, k, &opts)?, *include_frobenius))
                .collect::<Result<Vec<_>>>()?;
            let ok = match golden {
                Some(path) => {
                    let want = std::fs::read_to_string(path).with_context(|| format!("--golden {}", path.display()))?;
                    let same = tables_csv(&results) == want;
                    if !same {
                        eprintln!("xrh: output differs from {}", path.display());
                    }
                    same
                }
                None => true,
            };
            emit_tables(&mut out, &results, &opts)?;
            ok
        }
        Command::VerifyKnown { kmin, kmax, row } => known(g, &opts, &mut out, *kmin, *kmax, *row)?,
        Command::VerifyFamilies { family, kmin, kmax, max_q2, budget, summary_only } => {
            let sweep = SweepOptions { max_q2: *max_q2, budget: *budget, seed: g.seed, ..Default::default() };
            families(g, &opts, &mut out, family, *kmin, *kmax, &sweep, *summary_only)?
        }
        Command::Search { include_frobenius, linearized, t } => {
            let ctx = single_field(g, &opts)?;
            if *linearized {
                let rep = classify_linearized(&ctx, *t, g.seed)?;
                let ok = rep.mismatches == 0;
                out.record(Some(&ctx), serde_json::to_value(&rep)?, || {
                    format!(
                        "p={} k={} t={}: {} vectors, {} monomial, {} binomial, {} mismatches{}",
                        rep.p,
                        rep.k,
                        rep.t,
                        rep.checked,
                        rep.monomials,
                        rep.binomials,
                        rep.mismatches,
                        rep.seed.map(|s| format!(" (sampled, seed {s})")).unwrap_or_default()
                    )
                })?;
                ok
            } else {
                let res = monomial_search(&ctx, *include_frobenius)?;
                emit_tables(&mut out, &[res], &opts)?;
                true
            }
        }
    };
    out.finish()?;
    Ok(ok)
}

fn ctx_options(g: &Global) -> Result<CtxOptions> {
    let mut opts = CtxOptions::default();
    if let Some(path) = &g.modulus {
        let text = std::fs::read_to_string(path).with_context(|| format!("--modulus {}", path.display()))?;
        ModulusSpec::parse(&text)?.apply(&mut opts);
    }
    Ok(opts)
}

fn field(p: u32, k: u32, opts: &CtxOptions) -> Result<FieldCtx> {
    FieldCtx::with_options(p, k, opts).with_context(|| format!("field p={p} k={k}"))
}

fn single_field(g: &Global, opts: &CtxOptions) -> Result<FieldCtx> {
    match (g.p, g.k) {
        (Some(p), Some(k)) => field(p, k, opts),
        (None, _) => bail!("--p is required"),
        (_, None) => bail!("--k is required"),
    }
}

fn parse_h(ctx: &FieldCtx, text: &str) -> Result<LaurentPoly> {
    LaurentPoly::parse(text, ctx.mid()).with_context(|| format!("--h {text:?}"))
}

fn failure_value(pr: &Printer, f: &Failure, elem: impl Fn(&Printer, u64) -> Value) -> Value {
    match *f {
        Failure::Collision { first, second, image } => {
            json!({"kind": "collision", "first": elem(pr, first), "second": elem(pr, second), "image": elem(pr, image)})
        }
        Failure::Undefined { input } => json!({"kind": "undefined", "input": elem(pr, input)}),
        Failure::Escape { input, image } => {
            json!({"kind": "escape", "input": elem(pr, input), "image": elem(pr, image)})
        }
    }
}

fn witness_value(pr: &Printer, w: &Witness) -> Value {
    let top = |pr: &Printer, e: u64| pr.top(Fq2(e as u32));
    let mid = |pr: &Printer, e: u64| pr.mid(Fq(e as u32));
    match w {
        Witness::Gcd { r, gcd } => json!({"condition": "gcd", "r": r, "gcd": gcd}),
        Witness::GFixed { x, g } => json!({"condition": "g_fixed", "x": top(pr, *x), "g": top(pr, *g)}),
        Witness::HZero { x } => json!({"condition": "h_zero", "x": top(pr, *x)}),
        Witness::DegeneratePoint { a } => json!({"condition": "degenerate_point", "a": mid(pr, *a)}),
        Witness::RNotPermutation { failure } => {
            json!({"condition": "r_not_permutation", "failure": failure_value(pr, failure, mid)})
        }
    }
}

fn verify(g: &Global, opts: &CtxOptions, out: &mut Emitter, h: &str, r: i64, oracle: bool) -> Result<bool> {
    let ctx = single_field(g, opts)?;
    let pr = Printer { ctx: &ctx, pretty: g.pretty };
    let hp = parse_h(&ctx, h)?;
    let rep = check_conditions(&ctx, &hp, r, oracle)?;
    let witnesses: Vec<Value> = rep.witnesses.iter().map(|w| witness_value(&pr, w)).collect();
    let body = json!({
        "h": pr.laurent(&hp),
        "r": r,
        "gcd_ok": rep.gcd_ok,
        "g_fixed_ok": rep.g_fixed_ok,
        "h_nonzero_ok": rep.h_nonzero_ok,
        "r_permutes_ok": rep.r_permutes_ok,
        "conditions_hold": rep.conditions_hold(),
        "oracle": rep.oracle_verdict,
        "doubled": rep.doubled,
        "witnesses": witnesses,
    });
    let text = || {
        let mut lines = vec![
            format!("gcd_ok: {}", rep.gcd_ok),
            format!("g_fixed_ok: {}", rep.g_fixed_ok),
            format!("h_nonzero_ok: {}", rep.h_nonzero_ok),
            format!("r_permutes_ok: {}", rep.r_permutes_ok),
        ];
        if let Some(v) = rep.oracle_verdict {
            lines.push(format!("oracle: {v}"));
        }
        lines.extend(witnesses.iter().map(|w| format!("witness: {w}")));
        lines.join("\n")
    };
    out.record(Some(&ctx), body, text)?;
    Ok(rep.conditions_hold() && rep.consistent())
}

fn reduce(g: &Global, opts: &CtxOptions, out: &mut Emitter, h: &str) -> Result<bool> {
    let ctx = single_field(g, opts)?;
    let pr = Printer { ctx: &ctx, pretty: g.pretty };
    let pair = reduce_h(&ctx, &parse_h(&ctx, h)?)?;
    let (h1, h2) = (pr.uni(&pair.h1), pr.uni(&pair.h2));
    let text = format!("h1 = {h1}, h2 = {h2}");
    out.record(Some(&ctx), json!({"h1": h1, "h2": h2}), || text)?;
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn construct(
    g: &Global,
    opts: &CtxOptions,
    out: &mut Emitter,
    h1: &str,
    h2: &str,
    r: i64,
    paper_form: bool,
    oracle: bool,
) -> Result<bool> {
    let ctx = single_field(g, opts)?;
    let pr = Printer { ctx: &ctx, pretty: g.pretty };
    let f = ctx.mid();
    let p1 = LaurentPoly::parse_symbol(h1, 'a', f).with_context(|| format!("--h1 {h1:?}"))?;
    let p2 = LaurentPoly::parse_symbol(h2, 'a', f).with_context(|| format!("--h2 {h2:?}"))?;
    let (h, divisions) = construct_h_counted(&ctx, &p1, &p2)?;
    let (shown, doubled) = if paper_form { (h.clone(), false) } else { h.to_integer_exponents() };
    let pp = assemble_f(&ctx, &h, r)?;
    let verdict = if oracle { Some(check_xr_h_poly(&ctx, &h, r as u64)?.is_permutation) } else { None };
    let body = json!({
        "h1": h1,
        "h2": h2,
        "r": r,
        "h": pr.laurent(&shown),
        "h_doubled": doubled,
        "divisions": divisions,
        "f": pr.terms(&pp.terms),
        "f_doubled": pp.doubled,
        "f_terms": pp.terms,
        "oracle": verdict,
    });
    let text = || {
        let mut s = format!("h = {}\nf = {}", pr.laurent(&shown), pr.terms(&pp.terms));
        if doubled || pp.doubled {
            s.push_str("\n(exponents doubled: f(x^2) is shown)");
        }
        if let Some(v) = verdict {
            s.push_str(&format!("\noracle: {v}"));
        }
        s
    };
    out.record(Some(&ctx), body, text)?;
    Ok(true)
}

fn family(
    g: &Global,
    opts: &CtxOptions,
    out: &mut Emitter,
    fam: FamilyId,
    a: &ParamArgs,
    oracle: bool,
) -> Result<bool> {
    let ctx = single_field(g, opts)?;
    let pr = Printer { ctx: &ctx, pretty: g.pretty };
    let params = FamilyParams { m: a.m, t: a.t, j: a.j, j2: a.j2, alpha: a.alpha, beta: a.beta };
    let inst = family_generate(&ctx, fam, &params)?;
    let exact = fam.is_odd().then(|| odd_family_exact(ctx.p(), ctx.k(), params.m.unwrap_or(0), fam));
    let verdict = if oracle { Some(check_xr_h_poly(&ctx, &inst.h, 1)?.is_permutation) } else { None };
    let body = json!({
        "family": fam.name(),
        "params": inst.params,
        "h": pr.laurent(&inst.h),
        "f": pr.terms(&inst.pp.terms),
        "f_terms": inst.pp.terms,
        "r": inst.pp.r,
        "doubled": inst.pp.doubled,
        "predicted": inst.predicted,
        "exact": exact,
        "oracle": verdict,
    });
    let text = || {
        let head = format!("{fam} {}", inst.params);
        let mut s = format!("{}\nf = {}\npredicted: {}", head.trim_end(), pr.terms(&inst.pp.terms), inst.predicted);
        if let Some(e) = exact {
            s.push_str(&format!("\nexact: {e}"));
        }
        if let Some(v) = verdict {
            s.push_str(&format!("\noracle: {v}"));
        }
        s
    };
    out.record(Some(&ctx), body, text)?;
    Ok(verdict.is_none_or(|v| v == inst.predicted))
}

fn monomial_search(ctx: &FieldCtx, include_frobenius: bool) -> Result<SearchResult> {
    Ok(if ctx.is_char2() { search_monomial_even(ctx, include_frobenius)? } else { search_monomial_odd(ctx)? })
}

fn tables_csv(results: &[SearchResult]) -> String {
    let mut s = String::from("p,k,s\n");
    for r in results {
        for row in r.csv_rows() {
            s.push_str(&row);
            s.push('\n');
        }
    }
    s
}

fn emit_tables(out: &mut Emitter, results: &[SearchResult], opts: &CtxOptions) -> Result<()> {
    match out.format() {
        // one row per hit, without field metadata, so the file diffs cleanly
        Format::Csv => print!("{}", tables_csv(results)),
        _ => {
            for r in results {
                let ctx = field(r.p, r.k, opts)?;
                let hits = r.hits.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
                let body = json!({"s": r.hits, "excluded": r.excluded});
                out.record(Some(&ctx), body, || format!("p={} k={}: {hits}", r.p, r.k))?;
            }
        }
    }
    Ok(())
}

fn known(g: &Global, opts: &CtxOptions, out: &mut Emitter, kmin: u32, kmax: u32, row: Option<u8>) -> Result<bool> {
    if g.p.is_some_and(|p| p != 2) {
        bail!("verify-known needs --p 2");
    }
    let mut ok = true;
    for k in kmin..=kmax {
        let ctx = field(2, k, opts)?;
        for entry in known_entries().iter().filter(|e| row.is_none_or(|r| r == e.row)) {
            let (body, text) = match verify_known(&ctx, entry) {
                Ok(o) => {
                    let mut v = serde_json::to_value(&o)?;
                    v["g"] = entry.g_text().into();
                    v["l"] = entry.l_text().into();
                    let text = format!(
                        "row {} k={k}: condition={} direct={} via_l={} l_matches={}",
                        entry.row,
                        o.condition_holds,
                        show(o.direct.map(|d| d.is_permutation)),
                        show(o.via_l),
                        show(o.l_matches),
                    );
                    (v, text)
                }
                Err(SearchError::VerdictMismatch { row, k, direct, via_l }) => {
                    ok = false;
                    let v = json!({"row": row, "mismatch": true, "direct": direct, "via_l": via_l});
                    (v, format!("row {row} k={k}: MISMATCH direct={direct} via_l={via_l}"))
                }
                Err(e) => return Err(e.into()),
            };
            out.record(Some(&ctx), body, || text)?;
        }
    }
    Ok(ok)
}

fn show(v: Option<bool>) -> String {
    v.map_or("-".into(), |b| b.to_string())
}

#[allow(clippy::too_many_arguments)]
fn families(
    g: &Global,
    opts: &CtxOptions,
    out: &mut Emitter,
    requested: &[FamilyId],
    kmin: Option<u32>,
    kmax: Option<u32>,
    sweep: &SweepOptions,
    summary_only: bool,
) -> Result<bool> {
    if g.modulus.is_some() {
        bail!("verify-families uses the default moduli; --modulus is not supported here");
    }
    let fams: Vec<FamilyId> = if requested.is_empty() { FamilyId::ALL.to_vec() } else { requested.to_vec() };
    let fields: Vec<(u32, u32)> = match (g.p, g.k) {
        (Some(p), Some(k)) => vec![(p, k)],
        (Some(p), None) => {
            let lo = kmin.unwrap_or(1);
            let hi = kmax.ok_or_else(|| anyhow!("--kmax (or --k) is required with --p"))?;
            (lo..=hi).map(|k| (p, k)).collect()
        }
        (None, _) => {
            let mut v = fields_up_to(sweep.max_q2, true);
            v.extend(fields_up_to(sweep.max_q2, false));
            v.retain(|&(_, k)| kmin.is_none_or(|lo| k >= lo) && kmax.is_none_or(|hi| k <= hi));
            v
        }
    };
    let mut ctxs = BTreeMap::new();
    let mut ok = true;
    for fam in fams {
        let rep = verify_family_sweep(&fields, fam, sweep)?;
        if !summary_only {
            for rec in &rep.records {
                let ctx = match ctxs.entry((rec.p, rec.k)) {
                    std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
                    std::collections::btree_map::Entry::Vacant(e) => e.insert(field(rec.p, rec.k, opts)?),
                };
                let mut body = serde_json::to_value(rec)?;
                body["params"] = rec.params.to_string().into();
                body["seed"] = sweep.seed.into();
                let text = || {
                    format!(
                        "{} p={} k={} {}: predicted={} verdict={}{}",
                        fam,
                        rec.p,
                        rec.k,
                        rec.params,
                        rec.predicted,
                        rec.verdict,
                        if rec.agree { "" } else { " MISMATCH" }
                    )
                };
                out.record(Some(ctx), body, text)?;
            }
        }
        let mismatches = rep.checked - rep.agreements;
        ok &= mismatches == 0;
        let summary = json!({
            "kind": "summary",
            "family": fam.name(),
            "checked": rep.checked,
            "agreements": rep.agreements,
            "mismatches": mismatches,
            "exact_agreements": fam.is_odd().then_some(rep.exact_agreements),
            "inadmissible": rep.inadmissible,
            "sampled_fields": rep.sampled_fields,
            "seed": rep.seed,
        });
        let text = format!(
            "{fam}: {}/{} agree{}{}",
            rep.agreements,
            rep.checked,
            if fam.is_odd() { format!(", exact rule {}/{}", rep.exact_agreements, rep.checked) } else { String::new() },
            if rep.sampled_fields.is_empty() { String::new() } else { format!(", sampled with seed {}", rep.seed) },
        );
        match out.format() {
            // summaries do not fit the per-tuple columns
            Format::Csv => eprintln!("{text}"),
            _ => out.record(None, summary, || text)?,
        }
    }
    Ok(ok)
}
