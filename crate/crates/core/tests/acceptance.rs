//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails. `ACCEPTANCE_ONLY=3,5` restricts the run.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use redproof::builders::*;
use redproof::formats::{parse_proof, write_proof, ProofFormat};
use redproof::gens::*;
use redproof::oracle;
use redproof::par;
use redproof::redundancy::{check_pr, check_rat, check_rat_lpr, check_witness, discrepancy};
use redproof::transforms::{blowup, dpr_to_drat_nnv, dpr_to_drat_nnv_stream, er_to_bc_nnv, pr_to_spr_disc, ErStep};
use redproof::*;

/// Bound on `|out| / (|in| · |Γ|)` for the DPR⁻ to DRAT⁻ simulation. The
/// builder corpus peaks at about 3.4 (bphp2).
const DRAT_BLOWUP_CONST: f64 = 4.0;
/// Constant in `|out| ≤ 2^δ · c · |in|` for the discrepancy transform (measured peak 0.68).
const DISC_CONST: f64 = 1.0;
/// Constant in `|out| ≤ c · m` for the ER to BC⁻ transform.
const ER_CONST: usize = 5;

type Outcome = Result<String, String>;

#[derive(Default)]
struct Ctx {
    built: Vec<Instance>,
}

struct Instance {
    name: String,
    g: Formula,
    pf: Proof,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn strict(level: Rule) -> SystemSpec {
    SystemSpec::strict(level)
}

fn check_instance(ctx: &mut Ctx, name: String, g: Formula, pf: Proof, start: Instant, limit: Duration) -> Result<(), String> {
    let r = verify(&g, &pf, strict(Rule::Spr));
    let t = start.elapsed();
    ensure(r.verdict == Verdict::Accepted, || format!("{name}: {:?}", r.verdict))?;
    ensure(t < limit, || format!("{name}: took {t:?}"))?;
    ctx.built.push(Instance { name, g, pf });
    Ok(())
}

fn witnessed(pf: &Proof) -> usize {
    pf.iter().filter(|s| matches!(s, ProofStep::AddWitnessed(..))).count()
}

fn c1_php(ctx: &mut Ctx) -> Outcome {
    let mut sizes = Vec::new();
    for n in 2..=12usize {
        let t = Instant::now();
        let pf = build_php_spr(n);
        let expected: usize = (0..=n - 2).map(|i| (n - i) * (n - 1 - i)).sum();
        ensure(witnessed(&pf) == expected, || format!("n={n}: {} SPR steps, expected {expected}", witnessed(&pf)))?;
        ensure(pf.len() <= 5 * n * n * n, || format!("n={n}: {} steps", pf.len()))?;
        sizes.push(pf.len());
        check_instance(ctx, format!("php{n}"), gen_php(n), pf, t, Duration::from_secs(10))?;
    }
    Ok(format!("n=2..12 accepted, steps {sizes:?}"))
}

/// Least-squares slope of ln(y) against ln(x).
fn fitted_exponent(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = pts.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

fn c2_bphp(ctx: &mut Ctx) -> Outcome {
    let mut pts = Vec::new();
    for k in 1..=4 {
        let t = Instant::now();
        let pf = build_bphp_spr(k);
        pts.push(((1usize << k) as f64, pf.len() as f64));
        check_instance(ctx, format!("bphp{k}"), gen_bphp(k), pf, t, Duration::from_secs(30))?;
    }
    let e = fitted_exponent(&pts);
    ensure(e < 4.0, || format!("fitted exponent {e:.2}"))?;
    let steps: Vec<usize> = pts.iter().map(|p| p.1 as usize).collect();
    Ok(format!("k=1..4 accepted, steps {steps:?}, exponent {e:.2}"))
}

fn c3_families(ctx: &mut Ctx) -> Outcome {
    let limit = Duration::from_secs(30);
    let mut slowest = (String::new(), Duration::ZERO);
    let mut note = |name: &str, t: Instant| {
        if t.elapsed() > slowest.1 {
            slowest = (name.to_string(), t.elapsed());
        }
    };
    for n in (3..=13).step_by(2) {
        let t = Instant::now();
        let pf = build_parity_spr(n).map_err(|e| e.to_string())?;
        let name = format!("parity{n}");
        check_instance(ctx, name.clone(), gen_parity(n).unwrap(), pf, t, limit)?;
        note(&name, t);
    }
    for (n, m) in [(4, 3), (5, 3), (6, 4), (8, 4)] {
        let t = Instant::now();
        let pf = build_cc_spr(n, m).map_err(|e| e.to_string())?;
        let name = format!("cc{n}_{m}");
        check_instance(ctx, name.clone(), gen_cc(n, m).unwrap(), pf, t, limit)?;
        note(&name, t);
    }
    let mut graphs = vec![
        ("tseitin_k3".to_string(), complete(3)),
        ("tseitin_grid3x3".to_string(), grid(3, 3)),
        ("tseitin_wheel6".to_string(), wheel(6)),
    ];
    for (i, n) in [8, 8, 10, 10, 12, 12, 14, 14, 16, 16].into_iter().enumerate() {
        graphs.push((format!("tseitin_reg{n}_s{i}"), random_regular(n, 3, i as u64).unwrap()));
    }
    for (name, gr) in graphs {
        let t = Instant::now();
        let charge = default_charge(gr.num_vertices());
        let pf = build_tseitin_spr(&gr, &charge).map_err(|e| format!("{name}: {e}"))?;
        check_instance(ctx, name.clone(), gen_tseitin(&gr, &charge).unwrap(), pf, t, limit)?;
        note(&name, t);
    }
    Ok(format!("parity, clique-coloring and 13 Tseitin instances accepted; slowest {} in {:.2?}", slowest.0, slowest.1))
}

fn random_3cnf(rng: &mut ChaCha8Rng, vars: &[Var], m: usize) -> Formula {
    let mut g = Formula::new(*vars.iter().max().unwrap());
    for _ in 0..m {
        let vs: Vec<Var> = vars.choose_multiple(rng, 3).copied().collect();
        g.push(Clause::new(vs.into_iter().map(|v| Lit::with_value(v, rng.gen()))).unwrap());
    }
    g
}

fn random_unsat(rng: &mut ChaCha8Rng, vars: &[Var]) -> Formula {
    loop {
        let g = random_3cnf(rng, vars, 6 * vars.len());
        if !oracle::is_satisfiable(&g).unwrap() {
            return g;
        }
    }
}

fn c4_gadgets(_: &mut Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bases = vec![(gen_php(2), PhpLayout { n: 2 }.p(0, 0))];
    let vars: Vec<Var> = (1..=8).collect();
    for _ in 0..10 {
        let g = random_unsat(&mut rng, &vars);
        let vs: Vec<Var> = g.vars().into_iter().collect();
        let x = *vs.choose(&mut rng).unwrap();
        bases.push((g, x));
    }
    let mut runs = 0;
    for (idx, (g, x)) in bases.iter().enumerate() {
        for size in 1..=3 {
            let made = [orify(g, *x, size), xorify(g, *x, size), lift_index(g, *x, size)];
            for r in made {
                let (gp, meta) = r.map_err(|e| e.to_string())?;
                let pf = undo_gadget(&gp, &meta).map_err(|e| format!("base {idx} {meta}: {e}"))?;
                let rep = verify(&gp, &pf, strict(Rule::Spr));
                ensure(rep.verdict == Verdict::Incomplete, || format!("base {idx} {meta}: {:?}", rep.verdict))?;
                let mut live = gp.clone();
                for s in &pf {
                    live.push(s.clause().clone());
                }
                let have = live.canonical();
                ensure(g.canonical().iter().all(|c| have.contains(c)), || format!("base {idx} {meta}: original clauses not recovered"))?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} undo prefixes accepted and restore the original clauses"))
}

fn c5_drat(ctx: &mut Ctx) -> Outcome {
    if ctx.built.is_empty() {
        return Err("no builder outputs (run criteria 1-3)".into());
    }
    let spec = SystemSpec::new(Rule::Rat, true, false);
    let results = par::map(&ctx.built, |inst| {
        let mut ch = Checker::new(&inst.g, spec);
        let mut err = None;
        let mut k = 0usize;
        let out = dpr_to_drat_nnv_stream(&inst.g, &inst.pf, false, &mut |s| {
            if err.is_none() {
                if let Err(e) = ch.step(&s) {
                    err = Some((k, e));
                }
            }
            k += 1;
        });
        match (out, err) {
            (Err(e), _) => Err(format!("{}: {e}", inst.name)),
            (_, Some((k, e))) => Err(format!("{}: DRAT step {k} rejected: {e}", inst.name)),
            (Ok(n), None) if !ch.is_refuted() => Err(format!("{}: {n} steps, no empty clause", inst.name)),
            (Ok(n), None) => Ok((inst.name.clone(), blowup(inst.pf.len(), n), blowup(inst.pf.len() * inst.g.len(), n))),
        }
    });
    let mut raw = (String::new(), 0.0f64);
    let mut norm = (String::new(), 0.0f64);
    for r in results {
        let (name, b, nb) = r?;
        if b > raw.1 {
            raw = (name.clone(), b);
        }
        if nb > norm.1 {
            norm = (name, nb);
        }
    }
    ensure(norm.1 <= DRAT_BLOWUP_CONST, || format!("|out|/(|in|·|Γ|) = {:.2} on {} exceeds {DRAT_BLOWUP_CONST}", norm.1, norm.0))?;
    Ok(format!(
        "{} instances accepted under DRAT-; max |out|/|in| {:.1} ({}), max |out|/(|in|·|Γ|) {:.2} ({}) <= {DRAT_BLOWUP_CONST}",
        ctx.built.len(),
        raw.1,
        raw.0,
        norm.1,
        norm.0
    ))
}

/// A PR⁻ refutation of an unsatisfiable core on vars 1..5 padded with
/// clauses over 6..8 that a fixed assignment satisfies.
fn synthetic_pr(rng: &mut ChaCha8Rng) -> (Formula, Proof, usize) {
    let core: Vec<Var> = (1..=5).collect();
    let all: Vec<Var> = (1..=8).collect();
    loop {
        let mut g = random_unsat(rng, &core).with_num_vars(8);
        let aut = PartialAssignment::from_pairs((6..=8).map(|v| (v, rng.gen())));
        for k in 0..rng.gen_range(3..=6) {
            let vs: Vec<Var> = all.choose_multiple(rng, 3).copied().collect();
            let mut lits: Vec<Lit> = vs.iter().map(|&v| Lit::with_value(v, rng.gen())).collect();
            let pad = if k < 3 { 6 + k } else { rng.gen_range(6..=8) };
            lits.retain(|l| l.var() != pad);
            lits.push(Lit::with_value(pad, aut.get(pad).unwrap()));
            g.push(Clause::new(lits).unwrap());
        }
        let mut live = g.clone();
        let mut pf = Vec::new();
        let mut max_disc = 0;
        for _ in 0..200 {
            if pf.len() >= 4 {
                break;
            }
            let w = rng.gen_range(1..=3);
            let Some(c) = Clause::try_from_lits(all.choose_multiple(rng, w).map(|&v| Lit::with_value(v, rng.gen()))) else {
                continue;
            };
            let mut tau = if rng.gen_bool(0.5) { aut.clone() } else { PartialAssignment::new() };
            for &l in c.lits() {
                if rng.gen_bool(0.5) || tau.is_empty() {
                    tau.set(l.var(), rng.gen());
                }
            }
            for _ in 0..rng.gen_range(0..=2) {
                tau.set(*all.choose(rng).unwrap(), rng.gen());
            }
            let d = discrepancy(&c, &tau);
            if d > 3 || !tau.satisfies(&c) || live.contains_live(&c) || !check_pr(&live, &c, &tau) {
                continue;
            }
            max_disc = max_disc.max(d);
            live.push(c.clone());
            pf.push(ProofStep::AddWitnessed(c, Witness::Assignment(tau)));
        }
        if max_disc == 0 {
            continue;
        }
        let refutation = oracle::resolution_refutation(&g).expect("unsatisfiable");
        pf.extend(refutation.into_iter().map(ProofStep::AddRup));
        if !pf.last().is_some_and(|s| s.clause().is_empty()) {
            pf.push(ProofStep::AddRup(Clause::empty()));
        }
        return (g, pf, max_disc);
    }
}

fn c6_discrepancy(_: &mut Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let mut discs = [0usize; 4];
    for i in 0..100 {
        let (g, pf, d) = synthetic_pr(&mut rng);
        ensure(verify(&g, &pf, strict(Rule::Pr)).accepted(), || format!("synthetic proof {i} is not PR-"))?;
        let out = pr_to_spr_disc(&g, &pf).map_err(|e| format!("proof {i}: {e}"))?;
        let r = verify(&g, &out, strict(Rule::Spr));
        ensure(r.accepted(), || format!("proof {i}: {:?}", r.verdict))?;
        let ratio = out.len() as f64 / ((1usize << d) as f64 * pf.len() as f64);
        worst = worst.max(ratio);
        ensure(ratio <= DISC_CONST, || format!("proof {i}: size {} vs input {} at discrepancy {d}", out.len(), pf.len()))?;
        discs[d] += 1;
    }
    Ok(format!("100 proofs (max discrepancy 1/2/3: {}/{}/{}) accepted under SPR-; max |out|/(2^d|in|) {worst:.2} <= {DISC_CONST}", discs[1], discs[2], discs[3]))
}

fn er_check(g: &Formula, er: &[ErStep], worst: &mut f64) -> Result<(), String> {
    let (gx, pf) = er_to_bc_nnv(g, er).map_err(|e| e.to_string())?;
    let r = verify(&gx, &pf, strict(Rule::Bc));
    ensure(r.accepted(), || format!("{:?}", r.verdict))?;
    let m = er.len().max(1);
    *worst = worst.max(pf.len() as f64 / m as f64);
    ensure(pf.len() <= ER_CONST * m, || format!("{} steps for m={m}", pf.len()))
}

fn c7_er(_: &mut Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let vars: Vec<Var> = (1..=8).collect();
    let mut worst = 0.0;
    for i in 0..50 {
        let g = random_unsat(&mut rng, &vars);
        let er: Vec<ErStep> = oracle::resolution_refutation(&g).unwrap().into_iter().map(ErStep::Resolve).collect();
        er_check(&g, &er, &mut worst).map_err(|e| format!("resolution {i}: {e}"))?;
    }
    // Extension variables take the smallest ids so the refutation search
    // branches on them first and actually uses their clauses.
    let mut used = 0;
    for i in 0..20 {
        let k = 1 + i % 3;
        let base: Vec<Var> = (k as Var + 1..=k as Var + 8).collect();
        let g = random_unsat(&mut rng, &base);
        let mut er = Vec::new();
        let mut known = base.clone();
        let mut ext = g.clone();
        for x in (1..=k as Var).rev() {
            let pv: Vec<Var> = known.choose_multiple(&mut rng, 2).copied().collect();
            let (p, q) = (Lit::with_value(pv[0], rng.gen()), Lit::with_value(pv[1], rng.gen()));
            er.push(ErStep::Extend { x, p, q });
            for c in ErStep::extension_clauses(x, p, q).unwrap() {
                ext.push(c);
            }
            known.push(x);
        }
        let res = oracle::resolution_refutation(&ext).unwrap();
        if res.iter().any(|c| c.vars().any(|v| v <= k as Var)) {
            used += 1;
        }
        er.extend(res.into_iter().map(ErStep::Resolve));
        er_check(&g, &er, &mut worst).map_err(|e| format!("extended {i}: {e}"))?;
    }
    Ok(format!("70 ER refutations converted and accepted under BC- ({used}/20 mention extension variables); max |out|/m {worst:.2} <= {ER_CONST}"))
}

fn random_witness(rng: &mut ChaCha8Rng, c: &Clause, vars: &[Var]) -> Witness {
    match rng.gen_range(0..4) {
        0 if !c.is_empty() => Witness::Pivot(*c.lits().choose(rng).unwrap()),
        1 => {
            let mut t = negate_clause(c);
            for &l in c.lits() {
                if rng.gen_bool(0.5) {
                    t.set(l.var(), l.is_pos());
                }
            }
            Witness::Assignment(t)
        }
        2 => {
            let mut t = negate_clause(c);
            if let Some(&l) = c.lits().choose(rng) {
                t.set(l.var(), l.is_pos());
            }
            for _ in 0..rng.gen_range(1..=3) {
                t.set(*vars.choose(rng).unwrap(), rng.gen());
            }
            Witness::Assignment(t)
        }
        _ => {
            let mut s = Substitution::identity();
            for _ in 0..rng.gen_range(1..=4) {
                let v = *vars.choose(rng).unwrap();
                let img = if rng.gen_bool(0.5) {
                    Image::Const(rng.gen())
                } else {
                    Image::Lit(Lit::with_value(*vars.choose(rng).unwrap(), rng.gen()))
                };
                s.set(v, img);
            }
            Witness::Subst(s)
        }
    }
}

fn random_clause(rng: &mut ChaCha8Rng, vars: &[Var], max: usize) -> Option<Clause> {
    let w = rng.gen_range(0..=max);
    Clause::try_from_lits((0..w).map(|_| Lit::with_value(*vars.choose(rng).unwrap(), rng.gen())))
}

fn c8_fuzz(_: &mut Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut accepted, mut on_sat, mut tries) = (0usize, 0usize, 0usize);
    while accepted < 10_000 {
        let nv = rng.gen_range(4..=12);
        let vars: Vec<Var> = (1..=nv).collect();
        let m = rng.gen_range(nv as usize..=4 * nv as usize);
        let mut g = random_3cnf(&mut rng, &vars, m);
        for _ in 0..20 {
            tries += 1;
            let Some(c) = random_clause(&mut rng, &vars, 3) else { continue };
            let w = random_witness(&mut rng, &c, &vars);
            if check_witness(&g, &c, &w).is_err() {
                continue;
            }
            let before = oracle::is_satisfiable(&g).unwrap();
            let mut h = g.clone();
            h.push(c.clone());
            let after = oracle::is_satisfiable(&h).unwrap();
            ensure(before == after, || format!("accepted {c:?} with {w:?} changed satisfiability"))?;
            accepted += 1;
            on_sat += before as usize;
            g = h;
        }
    }

    let spec = SystemSpec::new(Rule::Sr, true, false);
    let mut longest = 0;
    for i in 0..10_000 {
        let nv = rng.gen_range(3..=10);
        let vars: Vec<Var> = (1..=nv).collect();
        let g = loop {
            let m = rng.gen_range(1..=3 * nv as usize);
            let g = random_3cnf(&mut rng, &vars, m);
            if oracle::is_satisfiable(&g).unwrap() {
                break g;
            }
        };
        let mut ch = Checker::new(&g, spec);
        let mut pf = Vec::new();
        for _ in 0..15 {
            let step = match rng.gen_range(0..5) {
                0 => match ch.live_clauses().collect::<Vec<_>>().choose(&mut rng) {
                    Some(c) => ProofStep::Delete((*c).clone()),
                    None => continue,
                },
                1 => match random_clause(&mut rng, &vars, 3) {
                    Some(c) => ProofStep::AddRup(c),
                    None => continue,
                },
                _ => match random_clause(&mut rng, &vars, 3) {
                    Some(c) => {
                        let w = random_witness(&mut rng, &c, &vars);
                        ProofStep::AddWitnessed(c, w)
                    }
                    None => continue,
                },
            };
            if ch.step(&step).is_ok() {
                pf.push(step);
            }
        }
        longest = longest.max(pf.len());
        pf.push(ProofStep::AddRup(Clause::empty()));
        let r = verify(&g, &pf, spec);
        ensure(!r.accepted(), || format!("formula {i}: satisfiable formula refuted by {pf:?}"))?;
    }
    Ok(format!("{accepted} accepted steps ({on_sat} on satisfiable sets, {tries} tries) preserve satisfiability; 10000 satisfiable formulas never refuted (longest assembled prefix {longest})"))
}

fn c9_equivalences(_: &mut Ctx) -> Outcome {
    // Every (Γ, C, p) over 4 variables is a renaming of one with p = x1 and
    // C = x1 ∨ x2 ∨ … ∨ xk, so those four clauses cover the space.
    let mut all = Vec::new();
    for code in 1..81u32 {
        let mut lits = Vec::new();
        let mut x = code;
        for v in 1..=4 {
            match x % 3 {
                1 => lits.push(Lit::pos(v)),
                2 => lits.push(Lit::neg(v)),
                _ => {}
            }
            x /= 3;
        }
        all.push(Clause::new(lits).unwrap());
    }
    let cs: Vec<Clause> = (1..=4).map(|k| Clause::new((1..=k).map(Lit::pos)).unwrap()).collect();
    let p = Lit::pos(1);
    let n = all.len();
    let mut sets: Vec<Vec<usize>> = vec![vec![]];
    for a in 0..n {
        sets.push(vec![a]);
        for b in a + 1..n {
            sets.push(vec![a, b]);
            for c in b + 1..n {
                sets.push(vec![a, b, c]);
                for d in c + 1..n {
                    sets.push(vec![a, b, c, d]);
                }
            }
        }
    }
    let disagreements: usize = par::map(&sets, |s| {
        let g = Formula::from_clauses(s.iter().map(|&i| all[i].clone())).with_num_vars(4);
        cs.iter().filter(|c| check_rat(&g, c, p) != check_rat_lpr(&g, c, p)).count()
    })
    .into_iter()
    .sum();
    ensure(disagreements == 0, || format!("{disagreements} RAT/LPR disagreements"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let vars: Vec<Var> = (1..=10).collect();
    let rand_subst = |rng: &mut ChaCha8Rng| {
        let mut s = Substitution::identity();
        for &v in &vars {
            match rng.gen_range(0..4) {
                0 => s.set(v, Image::Const(rng.gen())),
                1 => s.set(v, Image::Lit(Lit::with_value(*vars.choose(rng).unwrap(), rng.gen()))),
                _ => {}
            }
        }
        s
    };
    for i in 0..10_000 {
        let m = rng.gen_range(0..12);
        let g = Formula::from_clauses((0..m).filter_map(|_| random_clause(&mut rng, &vars, 4))).with_num_vars(10);
        let (t, p) = (rand_subst(&mut rng), rand_subst(&mut rng));
        let tp = compose(&t, &p);
        let lhs = restrict_formula(&restrict_formula(&g, &p), &t);
        let rhs = restrict_formula(&g, &tp);
        ensure(lhs.canonical() == rhs.canonical(), || format!("composition triple {i}"))?;
        ensure(lhs.is_empty() == rhs.is_empty(), || format!("composition satisfaction {i}"))?;
    }

    let vars: Vec<Var> = (1..=7).collect();
    let mut checked = 0;
    while checked < 10_000 {
        let m = rng.gen_range(0..14);
        let g = Formula::from_clauses((0..m).filter_map(|_| random_clause(&mut rng, &vars, 3))).with_num_vars(7);
        let (Some(c), Some(d)) = (random_clause(&mut rng, &vars, 3), random_clause(&mut rng, &vars, 3)) else { continue };
        let Some(cd) = c.or(&d) else { continue };
        let ga = restrict_formula(&g, &negate_clause(&c));
        let dm = Clause::new(d.lits().iter().copied().filter(|&l| !c.contains(l))).unwrap();
        let (a, b, e) = (derives_1(&ga, &dm), derives_1(&ga, &d), derives_1(&g, &cd));
        ensure(a == b && b == e, || format!("triple equivalence fails for {g:?} {c:?} {d:?}"))?;
        checked += 1;
    }
    Ok(format!("RAT = LPR on all {} (Γ, C, p) classes; 10000 composition triples; 10000 triple-equivalence instances", sets.len() * cs.len()))
}

fn random_proof(rng: &mut ChaCha8Rng, fmt: ProofFormat) -> Proof {
    let vars: Vec<Var> = (1..=9).collect();
    let len = rng.gen_range(0..25);
    let mut pf = Vec::with_capacity(len);
    while pf.len() < len {
        let Some(c) = random_clause(rng, &vars, 5) else { continue };
        let kind = rng.gen_range(0..4);
        let step = match (fmt, kind) {
            (_, 0) if !c.is_empty() => ProofStep::Delete(c),
            (ProofFormat::Drat, _) | (ProofFormat::Native, 1) if !c.is_empty() => {
                let p = *c.lits().choose(rng).unwrap();
                ProofStep::AddWitnessed(c, Witness::Pivot(p))
            }
            (ProofFormat::Drat, _) => continue,
            (ProofFormat::Native, 2) | (ProofFormat::Pr, _) if !c.is_empty() => {
                let mut t = PartialAssignment::new();
                for _ in 0..rng.gen_range(0..5) {
                    t.set(*vars.choose(rng).unwrap(), rng.gen());
                }
                let l = *c.lits().choose(rng).unwrap();
                t.set(l.var(), l.is_pos());
                if rng.gen_bool(0.3) {
                    ProofStep::AddRup(c)
                } else {
                    ProofStep::AddWitnessed(c, Witness::Assignment(t))
                }
            }
            (ProofFormat::Native, 3) => {
                let w = random_witness(rng, &c, &vars);
                ProofStep::AddWitnessed(c, w)
            }
            _ => ProofStep::AddRup(c),
        };
        pf.push(step);
    }
    pf
}

fn c10_formats(_: &mut Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for fmt in [ProofFormat::Native, ProofFormat::Drat, ProofFormat::Pr] {
        for i in 0..1000 {
            let pf = random_proof(&mut rng, fmt);
            let text = write_proof(&pf, fmt).map_err(|e| format!("{fmt:?} proof {i}: {e}"))?;
            let back = parse_proof(&text, fmt).map_err(|e| format!("{fmt:?} proof {i}: {e}"))?;
            ensure(back == pf, || format!("{fmt:?} proof {i} changed in a round trip"))?;
        }
    }
    let spec = SystemSpec::new(Rule::Rat, true, false);
    let mut corpus: Vec<(String, Formula, Proof)> = Vec::new();
    for n in 2..=5 {
        corpus.push((format!("php{n}"), gen_php(n), build_php_spr(n)));
    }
    for n in [3, 5, 7] {
        corpus.push((format!("parity{n}"), gen_parity(n).unwrap(), build_parity_spr(n).unwrap()));
    }
    corpus.push(("cc4_3".into(), gen_cc(4, 3).unwrap(), build_cc_spr(4, 3).unwrap()));
    let k4 = complete(4);
    corpus.push(("tseitin_k4".into(), gen_tseitin(&k4, &default_charge(4)).unwrap(), build_tseitin_spr(&k4, &default_charge(4)).unwrap()));
    let mut steps = 0;
    for (name, g, pf) in &corpus {
        let drat = dpr_to_drat_nnv(g, pf).map_err(|e| format!("{name}: {e}"))?;
        let back = parse_proof(&write_proof(&drat, ProofFormat::Drat).map_err(|e| e.to_string())?, ProofFormat::Drat).map_err(|e| e.to_string())?;
        let (a, b) = (verify(g, &drat, spec), verify(g, &back, spec));
        ensure(a.accepted() && a.verdict == b.verdict && a.steps_checked == b.steps_checked, || format!("{name}: {:?} vs {:?}", a.verdict, b.verdict))?;
        steps += drat.len();
    }
    Ok(format!("3000 random round trips; {} DRAT- proofs ({steps} steps) verify identically after export/import", corpus.len()))
}

type Criterion = (usize, &'static str, fn(&mut Ctx) -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "PHP", c1_php),
        (2, "BPHP", c2_bphp),
        (3, "parity, clique-coloring, Tseitin", c3_families),
        (4, "gadget undo", c4_gadgets),
        (5, "DPR- to DRAT- simulation", c5_drat),
        (6, "discrepancy transform", c6_discrepancy),
        (7, "ER to BC-", c7_er),
        (8, "soundness fuzzing", c8_fuzz),
        (9, "equivalence properties", c9_equivalences),
        (10, "format round trips", c10_formats),
    ];
    let only: Option<HashSet<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let mut ctx = Ctx::default();
    let mut failed = 0;
    for (id, name, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let t = Instant::now();
        let r = run(&mut ctx);
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("criterion {id:>2} PASS  {name}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {msg} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
