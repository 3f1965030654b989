use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use richlines::affine::{general_position_check, AffineMap};
use richlines::caps::Caps;
use richlines::cli::{random_maps, run};
use richlines::construct::folner::{folner_set, rate_row};
use richlines::construct::{
    folner_det, folner_lines, klawe_select_lines, klawe_slopes, prime_params, FolnerParams,
};
use richlines::grid::{image_deficiency, richness, GroundSet};
use richlines::growth::{approx_closure, bsg_pipeline, ruzsa_check, triple_product, uniform_closure};
use richlines::oracle::{rlgp_exact, sym_fp_oracle};
use richlines::product_thm::{
    asym_experiment, dichotomy_check, elekes_family, lemma6_decomposition, nine_fold_check, Branch,
};
use richlines::scalar::rational;
use richlines::symset::{sym_bound_report, sym_group_check, sym_set};
use richlines::{CosetDescriptor, Field, Rational, Scalar};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn q(a: i64, b: i64) -> AffineMap {
    AffineMap::from_ints(a, b, Field::Rational).unwrap()
}

/// Smallest integer at least `r·n`.
fn ceil_mul(r: &Rational, n: usize) -> usize {
    (r * Rational::from_integer(BigInt::from(n))).ceil().to_integer().to_usize().unwrap()
}

fn ac1() -> Outcome {
    let eps = rational(4, 5);
    let mut checked = 0;
    let start = Instant::now();
    for n in 2..=6u32 {
        let nn = n as u128;
        let y = ok(folner_set(n, Caps::default().grid))?;
        check!(y.len() as u128 == nn.pow(n + 1), "N={n}: |Y| = {}", y.len());
        let ints: HashSet<u128> = y
            .elements()
            .iter()
            .map(|e| e.to_bigint().unwrap().to_u128().unwrap())
            .collect();
        let params = ok(FolnerParams::new(n, eps.clone()))?;
        let lines = ok(folner_lines(&params))?;
        let ks: Vec<u32> = (1..n).filter(|&b| 5 * b < 4 * n).collect();
        check!(lines.len() == ks.len(), "N={n}: {} lines, expected {}", lines.len(), ks.len());
        for (&b, line) in ks.iter().zip(&lines) {
            let (a, c) = (nn.pow(b), b as u128 * nn.pow(n - 1));
            let measured = ints.iter().filter(|&&x| !ints.contains(&(a * x + c))).count() as u128;
            let closed = b as u128 * nn.pow(n) + b as u128 * (nn.pow(n - b) - 1) / (nn - 1);
            check!(measured == closed, "N={n} b={b}: deficiency {measured} != {closed}");
            check!(
                ok(image_deficiency(line, &y))? as u128 == measured,
                "N={n} b={b}: library deficiency disagrees with enumeration"
            );
            check!(5 * measured <= 8 * nn.pow(n + 1), "N={n} b={b}: {measured} > 2eps|Y|");
            checked += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check!(secs.lt(&30.0), "took {secs:.1}s");
    Ok(format!("{checked} lines across N=2..6, {secs:.2}s"))
}

fn sarrus(m: [[i128; 3]; 3]) -> i128 {
    m[0][0] * m[1][1] * m[2][2] + m[0][1] * m[1][2] * m[2][0] + m[0][2] * m[1][0] * m[2][1]
        - m[0][2] * m[1][1] * m[2][0]
        - m[0][0] * m[1][2] * m[2][1]
        - m[0][1] * m[1][0] * m[2][2]
}

/// No two parallel, no three through one point, by direct intersection.
fn gp_by_intersections(lines: &[AffineMap]) -> bool {
    let mut points: BTreeMap<(Scalar, Scalar), BTreeSet<usize>> = BTreeMap::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            match lines[i].intersection(&lines[j]) {
                None => return false,
                Some(p) => {
                    let s = points.entry(p).or_default();
                    s.insert(i);
                    s.insert(j);
                }
            }
        }
    }
    points.values().all(|s| s.len() == 2)
}

fn ac2() -> Outcome {
    let mut dets = 0;
    for n in 5..=7u32 {
        let params = ok(FolnerParams::new(n, rational(4, 5)))?;
        let lines = ok(folner_lines(&params))?;
        check!(ok(general_position_check(&lines))?.is_empty(), "N={n}: GP check reports violations");
        check!(gp_by_intersections(&lines), "N={n}: intersection oracle finds a violation");
        let pw = |e: u32| (n as i128).pow(e);
        for i in 1..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let d = ok(folner_det(i, j, k, n))?;
                    let direct = sarrus([[1, 1, 1], [pw(i), pw(j), pw(k)], [i as i128, j as i128, k as i128]]);
                    check!(d == BigInt::from(direct), "N={n} ({i},{j},{k}): {d} != {direct}");
                    check!(d.is_negative(), "N={n} ({i},{j},{k}): det {d} not negative");
                    dets += 1;
                }
            }
        }
    }
    Ok(format!("{dets} determinants negative and equal to direct expansion"))
}

fn ac3() -> Outcome {
    let eps = rational(2, 5);
    let alpha = rational(1, 5);
    let mut ratios = Vec::new();
    for n in 3..=7u32 {
        let params = ok(FolnerParams::new(n, eps.clone()))?;
        let expected = ceil_mul(&eps, n as usize) - 1;
        let row = ok(rate_row(&params, &alpha))?;
        check!(row.lines == expected, "N={n}: |L| = {} != {expected}", row.lines);
        check!(row.ratio.lo.is_positive(), "N={n}: ratio lower end not positive");
        ratios.push(format!("N={n}:{}", row.ratio.to_report(4).lo));
    }
    Ok(format!("ratios {}", ratios.join(" ")))
}

fn ac4() -> Outcome {
    let primes: Vec<u64> = (5..=101).filter(|&p| richlines::scalar::is_prime_u64(p)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let caps = Caps::default();
    let mut sizes = Vec::new();
    for t in 0..20 {
        let p = primes[rng.gen_range(0..primes.len())];
        let f = ok(Field::prime(p))?;
        let n = rng.gen_range(2..=12usize.min(p as usize));
        let mut elems = BTreeSet::new();
        while elems.len() < n {
            elems.insert(rng.gen_range(0..p) as i64);
        }
        let y = ok(GroundSet::from_ints(f, elems.iter().copied()))?;
        let num = rng.gen_range(2..=n as i64);
        let alpha = rational(num, n as i64);
        let fast = ok(sym_set(&y, &alpha, &caps))?;
        let slow = ok(sym_fp_oracle(&y, &alpha, &caps))?;
        check!(fast.maps() == slow.maps(), "trial {t} (p={p}, |Y|={n}): sets differ");
        let bound = ok(sym_bound_report(&y, &alpha, &caps))?;
        check!(bound.size <= n.pow(4), "trial {t}: |sym| above |Y|^4");
        check!(ok(sym_group_check(&y, &caps))?.closed, "trial {t}: sym_1 not closed");
        sizes.push(fast.len());
    }
    let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
    Ok(format!("20 instances, |sym| from {lo} to {hi}"))
}

fn ap12_sym() -> Result<(GroundSet, Vec<AffineMap>), String> {
    let y = ok(GroundSet::progression(Field::Rational, 0, 12))?;
    let a = ok(sym_set(&y, &rational(1, 2), &Caps::default()))?.maps();
    Ok((y, a))
}

/// `|Y ∩ g⁻¹Y ∩ h⁻¹Y|` read off integer points.
fn rich_count(g: &AffineMap, ys: &[i64]) -> usize {
    let y = GroundSet::from_ints(Field::Rational, ys.iter().copied()).unwrap();
    richness(g, &y).unwrap()
}

fn ac5() -> Outcome {
    let start = Instant::now();
    let (y, a) = ap12_sym()?;
    let alpha = rational(1, 2);
    let c = ok(approx_closure(&a, &y, &alpha))?;
    let n = a.len();
    // (1/8)|A|^2
    check!(8 * c.relation.len() >= n * n, "|E| = {} below |A|^2/8 = {}", c.relation.len(), n * n);
    let ys: Vec<i64> = (0..12).collect();
    let need = ceil_mul(&rational(1, 8), 12);
    for g in &c.products {
        check!(rich_count(g, &ys) >= need, "product {g} not 1/8-rich");
        check!(c.products.contains(&g.inverse()), "inverse of {g} missing");
    }
    let secs = start.elapsed().as_secs_f64();
    check!(secs.lt(&10.0), "took {secs:.1}s");
    Ok(format!("|A|={n}, |E|={}, |A1|={}, {secs:.2}s", c.relation.len(), c.products.len()))
}

fn fiber_bound(a: &[AffineMap], y: &GroundSet, alpha: &Rational) -> Result<(usize, usize), String> {
    let u = ok(uniform_closure(a, y, alpha))?;
    let mut counts: BTreeMap<AffineMap, usize> = BTreeMap::new();
    for &(i, j) in u.relation.pairs() {
        let g = &u.relation.left()[i] * &u.relation.right()[j];
        *counts.entry(g).or_insert(0) += 1;
    }
    let kept: usize = counts.values().sum();
    check!(kept == u.relation.len(), "pair count mismatch");
    check!(counts.keys().cloned().collect::<Vec<_>>() == u.products, "product sets differ");
    for (g, &r) in &counts {
        check!(2 * r * counts.len() >= kept, "r({g}) = {r} < {kept}/(2*{})", counts.len());
    }
    Ok((kept, counts.len()))
}

fn ac6() -> Outcome {
    let (y, a) = ap12_sym()?;
    let (k1, w1) = fiber_bound(&a, &y, &rational(1, 2))?;
    // Translations by {0..7, 12} on an interval of 24: difference multiplicities 8 down to 1.
    let y2 = ok(GroundSet::progression(Field::Rational, 0, 24))?;
    let planted: Vec<AffineMap> = (0..8).chain([12]).map(|b| q(1, b)).collect();
    let (k2, w2) = fiber_bound(&planted, &y2, &rational(1, 2))?;
    Ok(format!("AP12: |E'|={k1} over {w1} products; planted: |E'|={k2} over {w2}"))
}

fn ac7() -> Outcome {
    let y = ok(GroundSet::progression(Field::Rational, 0, 40))?;
    let a: Vec<AffineMap> = (0..20).map(|b| q(1, b)).collect();
    for g in &a {
        check!(ok(richness(g, &y))? >= 20, "{g} is not 1/2-rich");
    }
    let r = ok(bsg_pipeline(&a, &y, &rational(1, 2), 1, &Caps::default()))?;
    let u = CosetDescriptor::TranslationCoset { slope: Scalar::from_i64(1, Field::Rational) };
    check!(r.coset == u, "final coset {} is not U", r.coset);
    let inside = a.iter().filter(|g| g.slope().is_one()).count();
    check!(r.overlap == inside && 2 * r.overlap >= a.len(), "overlap {} < |A|/2", r.overlap);
    Ok(format!("coset {}, overlap {}/{}", r.coset, r.overlap, a.len()))
}

fn ac8() -> Outcome {
    for n in 3..=10i64 {
        let tr: Vec<AffineMap> = (0..n).map(|i| q(1, i)).collect();
        let dil: Vec<AffineMap> = (0..n).map(|i| q(1 << i, 0)).collect();
        for (name, a, branch) in [("translations", &tr, Branch::SlopeGrowth), ("dilations", &dil, Branch::TorusThird)] {
            let t = ok(triple_product(a, 1 << 30))?;
            // independent count: triple sums of exponents / offsets
            let mut direct = BTreeSet::new();
            for x in a {
                for y in a {
                    for z in a {
                        direct.insert(&(x * y) * z);
                    }
                }
            }
            check!(t.set.len() == (3 * n - 2) as usize, "{name} n={n}: |A^3| = {}", t.set.len());
            check!(direct.len() == t.set.len(), "{name} n={n}: direct count {}", direct.len());
            let d = ok(dichotomy_check(a, None, 1 << 30))?;
            check!(d.branch == branch, "{name} n={n}: branch {:?}", d.branch);
        }
    }
    Ok("n=3..10, |A^3| = 3n-2, branches slope_growth / torus_third".into())
}

fn ac9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut tight = 0;
    for t in 0..200 {
        let mut draw = || {
            let n = rng.gen_range(1..=10);
            random_maps(&mut rng, 101, n)
        };
        let (a, b, c) = (ok(draw())?, ok(draw())?, ok(draw())?);
        let r = ok(ruzsa_check(&a, &b, &c, 1 << 30))?;
        check!(r.holds, "trial {t}: inequality fails");
        if Rational::from_integer(BigInt::from(r.lhs)) == r.rhs {
            tight += 1;
        }
    }
    Ok(format!("200 trials hold ({tight} with equality)"))
}

fn ac10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut done = 0;
    while done < 50 {
        let n = rng.gen_range(2..=12);
        let a = ok(random_maps(&mut rng, 101, n))?;
        let d = match lemma6_decomposition(&a, 1 << 30) {
            Ok(d) => d,
            Err(richlines::Error::NoWitness) => continue,
            Err(e) => return Err(e.to_string()),
        };
        // S and T recomputed from x and a0.
        let xi = d.x.inverse();
        let s: BTreeSet<AffineMap> = a.iter().map(|g| &(&(g * &d.x) * &g.inverse()) * &xi).collect();
        let a0i = d.a0.inverse();
        let t: BTreeSet<AffineMap> = a
            .iter()
            .map(|g| &a0i * g)
            .filter(|h| h * &d.x == &d.x * h)
            .collect();
        let slopes: BTreeSet<&Scalar> = a.iter().map(|g| g.slope()).collect();
        check!(s.iter().all(|g| g.slope().is_one()), "S not inside U");
        check!(s.len() == d.s.len() && t.len() == d.t.len(), "S or T differs from recount");
        check!(s.len() * t.len() >= a.len(), "|S||T| < |A|");
        check!(t.len() <= slopes.len(), "|T| > |A/U|");
        let nine = ok(nine_fold_check(&a, 1 << 34))?;
        let triple = ok(triple_product(&a, 1 << 30))?.set.len();
        let lhs = BigInt::from(nine.lhs) * BigInt::from(a.len()).pow(10);
        let rhs = BigInt::from(triple).pow(10) * BigInt::from(a.len());
        check!(lhs <= rhs && nine.holds, "nine-fold bound fails for |A| = {}", a.len());
        done += 1;
    }
    Ok("50 non-abelian sets".into())
}

fn ac11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fields = [Field::Rational, Field::prime(101).unwrap()];
    let mut lines = 0;
    for t in 0..20 {
        let f = fields[t % 2];
        let mut pick = |lo: i64, n: usize| -> Vec<Scalar> {
            let mut s = BTreeSet::new();
            while s.len() < n {
                s.insert(rng.gen_range(lo..40));
            }
            s.into_iter().map(|v| Scalar::from_i64(v, f)).collect()
        };
        let (a, b, c) = (pick(0, 6), pick(0, 4), pick(1, 4));
        let r = ok(asym_experiment(&a, &b, &c, 1, &rational(2, 1), false, &Caps::default()))?;
        let ground: Vec<Scalar> = a
            .iter()
            .flat_map(|x| b.iter().map(move |y| x + y))
            .chain(a.iter().flat_map(|x| c.iter().map(move |y| x * y)))
            .collect();
        let y = ok(GroundSet::new(f, ground))?;
        let fam = ok(elekes_family(&b, &c))?;
        for g in &fam {
            check!(ok(richness(g, &y))? >= a.len(), "trial {t}: {g} below |A|");
        }
        check!(r.min_richness >= a.len() && r.family == fam.len(), "trial {t}: report disagrees");
        lines += fam.len();
    }
    Ok(format!("20 instances, {lines} lines each |A|-rich"))
}

fn ac12() -> Outcome {
    let start = Instant::now();
    let (p, _) = ok(prime_params(10, &Caps::default()))?;
    let got = (p.k, p.q.to_string(), p.phi_q.to_string(), p.s, p.delta.clone());
    check!(
        got == (4, "210".into(), "48".into(), 44, rational(1, 16)),
        "prime_params(10) = {got:?}"
    );
    let slopes = ok(klawe_slopes(&[2, 3], 16, 1000))?;
    check!(slopes.len() == 9, "{} slopes", slopes.len());
    let slopes: Vec<BigInt> = slopes.into_iter().map(BigInt::from).collect();
    let lines = ok(klawe_select_lines(&slopes, &BigInt::from(28), Field::Rational))?;
    check!(lines.len() == 9, "{} lines", lines.len());
    check!(ok(general_position_check(&lines))?.is_empty(), "GP check reports violations");
    check!(gp_by_intersections(&lines), "intersection oracle finds a violation");
    let secs = start.elapsed().as_secs_f64();
    check!(secs.lt(&10.0), "took {secs:.1}s");
    Ok(format!("9 lines in general position, {secs:.2}s"))
}

fn ac13() -> Outcome {
    let caps = Caps::default();
    let two = ok(GroundSet::from_ints(Field::Rational, [0, 1]))?;
    let v = ok(rlgp_exact(&two, &Rational::one(), &caps))?.value;
    check!(v == 2, "rlgp({{0,1}}, 1) = {v}");
    let mut sweeps = Vec::new();
    for ys in [vec![0, 1, 2, 3, 4, 5], vec![0, 1, 2, 4, 8, 9, 11]] {
        let y = ok(GroundSet::from_ints(Field::Rational, ys.iter().copied()))?;
        let n = ys.len() as i64;
        let mut prev = usize::MAX;
        let mut values = Vec::new();
        // At alpha = 2/|Y| every line through two points qualifies and the exact search is out of reach.
        for num in 3..=n {
            let alpha = rational(num, n);
            let r = ok(rlgp_exact(&y, &alpha, &caps))?;
            check!(r.value <= prev, "value rises at alpha = {num}/{n}");
            check!(r.witness.len() == r.value, "witness size differs from value");
            for g in &r.witness {
                check!(ok(richness(g, &y))? >= num as usize, "witness line {g} not rich");
            }
            check!(gp_by_intersections(&r.witness), "witness not in general position");
            prev = r.value;
            values.push(r.value);
        }
        sweeps.push(format!("{values:?}"));
    }
    Ok(format!("sweeps {}", sweeps.join(" ")))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn command_set(inputs: &Path, out: &Path) -> Vec<Vec<String>> {
    let i = |f: &str| inputs.join(f).display().to_string();
    let o = |f: &str| out.join(f).display().to_string();
    let cmds: Vec<Vec<String>> = vec![
        vec!["construct", "folner", "--N", "3", "--eps", "2/5", "--out", &o("g.json"), "--lines-out", &o("gl.json")]
            .into_iter().map(String::from).collect(),
        vec!["construct".into(), "klawe".into(), "--x".into(), "3".into(), "--s".into(), "16".into(), "--bmax".into(), "28".into(), "--out".into(), o("k.json")],
        vec!["verify".into(), "--grid".into(), i("g.json"), "--lines".into(), i("gl.json"), "--alpha".into(), "1/2".into(), "--out".into(), o("v.csv")],
        vec!["sym".into(), "--grid".into(), i("ap.json"), "--alpha".into(), "1/2".into(), "--report".into(), "csv".into(), "--out".into(), o("s.csv")],
        vec!["sym".into(), "--grid".into(), i("ap.json"), "--alpha".into(), "1/2".into(), "--format".into(), "json".into(), "--out".into(), o("s.json")],
        vec!["bsg".into(), "--grid".into(), i("ap.json"), "--lines".into(), i("tr.json"), "--alpha".into(), "1/2".into(), "--J".into(), "2".into(), "--out".into(), o("b.json")],
        vec!["growth".into(), "triple".into(), "--lines".into(), i("tr.json"), "--out".into(), o("t.json")],
        vec!["growth".into(), "dichotomy".into(), "--lines".into(), i("mix.json"), "--p".into(), "101".into(), "--out".into(), o("d.json")],
        vec!["growth".into(), "ruzsa".into(), "--p".into(), "101".into(), "--trials".into(), "20".into(), "--seed".into(), "42".into(), "--out".into(), o("r.json")],
        vec!["growth".into(), "expander".into(), "--A".into(), i("a.json"), "--B".into(), i("b.json"), "--C".into(), i("c.json"), "--out".into(), o("e.json")],
        vec!["sumprod".into(), "--A".into(), i("a.json"), "--B".into(), i("b.json"), "--C".into(), i("c.json"), "--J".into(), "1".into(), "--K".into(), "3/2".into(), "--pipeline".into(), "--out".into(), o("sp.json")],
        vec!["oracle".into(), "rlgp".into(), "--grid".into(), i("small.json"), "--alpha".into(), "2/3".into(), "--out".into(), o("rl.json")],
        vec!["oracle".into(), "symfp".into(), "--grid".into(), i("fp.json"), "--alpha".into(), "2/5".into(), "--out".into(), o("sf.csv")],
        vec!["primes".into(), "--x".into(), "10".into(), "--out".into(), o("p.json")],
    ];
    cmds
}

fn ac14() -> Outcome {
    let inputs = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = inputs.path();
    let ap: Vec<String> = (0..12).map(|v| format!("\"{v}\"")).collect();
    write(&dir.join("ap.json"), &format!("{{\"field\":{{\"kind\":\"rational\"}},\"elements\":[{}]}}", ap.join(",")));
    write(&dir.join("small.json"), "{\"field\":{\"kind\":\"rational\"},\"elements\":[\"0\",\"1\",\"2\",\"4\",\"5\",\"7\"]}");
    write(&dir.join("fp.json"), "{\"field\":{\"kind\":\"fp\",\"p\":13},\"elements\":[\"0\",\"1\",\"2\",\"3\",\"5\"]}");
    let tr: Vec<String> = (0..4).map(|b| format!("{{\"a\":\"1\",\"b\":\"{b}\"}}")).collect();
    write(&dir.join("tr.json"), &format!("[{}]", tr.join(",")));
    write(&dir.join("mix.json"), r#"[{"a":"1","b":"1"},{"a":"2","b":"0"},{"a":"3","b":"5"},{"a":"2","b":"7"}]"#);
    write(&dir.join("a.json"), r#"["1","2","3","4","5"]"#);
    write(&dir.join("b.json"), r#"["0","1","2"]"#);
    write(&dir.join("c.json"), r#"["1","2","4"]"#);
    let bootstrap = ["construct", "folner", "--N", "3", "--eps", "2/5", "--out"];
    let mut argv: Vec<String> = std::iter::once("richlines").chain(bootstrap).map(String::from).collect();
    argv.extend([dir.join("g.json").display().to_string(), "--lines-out".into(), dir.join("gl.json").display().to_string()]);
    check!(run(argv) == 0, "bootstrap folner failed");

    let runs: Vec<tempfile::TempDir> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    let mut count = 0;
    for (r, threads) in runs.iter().zip(["1", "4"]) {
        for cmd in command_set(dir, r.path()) {
            let mut argv = vec!["richlines".to_string(), "--threads".into(), threads.into()];
            argv.extend(cmd.iter().cloned());
            let code = run(argv);
            check!(code == 0, "`{}` exited {code}", cmd.join(" "));
            count += 1;
        }
    }
    let list = |d: &Path| -> Vec<String> {
        let mut v: Vec<String> = std::fs::read_dir(d)
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect();
        v.sort();
        v
    };
    let (d0, d1) = (runs[0].path(), runs[1].path());
    check!(list(d0) == list(d1), "output file sets differ");
    for name in list(d0) {
        let x = std::fs::read(d0.join(&name)).unwrap();
        let y = std::fs::read(d1.join(&name)).unwrap();
        check!(!x.is_empty() && x == y, "{name} differs between runs");
    }
    Ok(format!("{} commands, {} files byte-identical across runs and thread counts", count / 2, list(d0).len()))
}

fn main() {
    let criteria: [Criterion; 14] = [
        ("Folner construction exactness", ac1),
        ("Folner general position", ac2),
        ("rate witness", ac3),
        ("symmetry-set completeness", ac4),
        ("approximate closure certificates", ac5),
        ("uniform closure fiber bound", ac6),
        ("pipeline recovery", ac7),
        ("tripling ground truth", ac8),
        ("Ruzsa inequality", ac9),
        ("commutator decomposition invariants", ac10),
        ("Elekes richness", ac11),
        ("prime-power planner and selector", ac12),
        ("RLGP oracle sanity", ac13),
        ("CLI determinism", ac14),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(r) => r,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into())),
        };
        match outcome {
            Ok(detail) => println!("[AC-{}] PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[AC-{}] FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
