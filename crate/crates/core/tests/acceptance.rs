//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p sierpinski-knopp --test acceptance`.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sierpinski_knopp::certify::{certify, export_table, CandidateTable, Encoding, Isometry};
use sierpinski_knopp::curve::{samples, tiling, Point};
use sierpinski_knopp::exact::{Dyadic, ExactRatio};
use sierpinski_knopp::extremal::treug_search;
use sierpinski_knopp::metrics::{
    angle_triple, disk_containment, fraction_metrics, locality_certified, locality_dyadic, slr,
    AngleClass,
};
use sierpinski_knopp::rivals::{rival_locality, RivalCurveId};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn four() -> ExactRatio {
    ExactRatio::integer(4)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exhaustive_depth_10() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| e.to_string())?;
    let start = Instant::now();
    let r = pool.install(|| locality_dyadic(10)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.attained_max == four(), || format!("max {} != 4", r.attained_max))?;
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("max 4 on one thread in {elapsed:.2?}"))
}

fn attained_four_all_depths() -> Outcome {
    for d in 1..=12 {
        let r = locality_dyadic(d).map_err(|e| e.to_string())?;
        ensure(r.attained_max == four(), || format!("depth {d}: {}", r.attained_max))?;
    }
    let s = slr(&Dyadic::zero(), &Dyadic::one()).map_err(|e| e.to_string())?;
    ensure(s == four(), || format!("slr(0,1) = {s}"))?;
    Ok("max 4 at depths 1..12, slr(0,1) = 4".into())
}

fn certified_bound() -> Outcome {
    let pinned: ExactRatio = "8200 / 2049".parse().map_err(|e| format!("{e}"))?;
    let mut prev: Option<ExactRatio> = None;
    let mut trail = Vec::new();
    for d in [6u32, 8, 10, 12, 14] {
        let r = locality_certified(d).map_err(|e| e.to_string())?;
        let u = r.certified_upper.ok_or("no certified bound")?;
        ensure(u >= four(), || format!("depth {d}: bound {u} below 4"))?;
        if let Some(p) = &prev {
            ensure(u <= *p, || format!("depth {d}: bound {u} above {p}"))?;
        }
        trail.push(format!("{d}:{:.6}", u.to_f64()));
        prev = Some(u);
    }
    let last = prev.expect("nonempty sweep");
    ensure(last == pinned, || format!("depth 14 bound {last} != pinned {pinned}"))?;
    Ok(format!("nonincreasing [{}], depth 14 = {last}", trail.join(" ")))
}

fn fraction_geometry() -> Outcome {
    let mut count = 0usize;
    for n in 0..=10 {
        let leg = Dyadic::new(2, n);
        let hyp = Dyadic::new(4, n);
        for f in tiling(n).map_err(|e| e.to_string())? {
            let m = fraction_metrics(&f).map_err(|e| e.to_string())?;
            let other_leg = f.right.dist_sq(&f.exit);
            ensure(m.leg_sq == leg && other_leg == leg && m.hyp_sq == hyp, || {
                format!(
                    "fraction ({n}, {}): legs {} {}, hyp {}",
                    f.index, m.leg_sq, other_leg, m.hyp_sq
                )
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} fractions exact"))
}

fn angle_inequality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let n = 1u64 << 12;
    let (mut checked, mut applicable, mut violations) = (0u32, 0u32, 0u32);
    while checked < 100_000 {
        let mut ks = [rng.gen_range(0..=n), rng.gen_range(0..=n), rng.gen_range(0..=n)];
        ks.sort_unstable();
        if ks[0] == ks[1] || ks[1] == ks[2] {
            continue;
        }
        checked += 1;
        let t = ks.map(|k| Dyadic::new(k, 12));
        let r = angle_triple(&t[0], &t[1], &t[2]).map_err(|e| e.to_string())?;
        let larger = (&r.slr12).max(&r.slr23);
        let legs = &r.d12_sq + &r.d23_sq;
        let ok = if r.d13_sq < legs {
            applicable += 1;
            *larger > r.slr13 && r.angle_class == AngleClass::AcuteAtMiddle
        } else if r.d13_sq == legs {
            applicable += 1;
            *larger >= r.slr13 && r.angle_class == AngleClass::RightAtMiddle
        } else {
            true
        };
        if !ok || !r.lemma_holds {
            violations += 1;
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok(format!(
        "{checked} triples, {applicable} with a non-obtuse middle angle, 0 violations"
    ))
}

fn disk_corollary() -> Outcome {
    let mut count = 0u32;
    for n in 0..=6u32 {
        for k in 0..1u128 << n {
            let ok = disk_containment(n, k, 12).map_err(|e| e.to_string())?;
            ensure(ok, || format!("fraction ({n}, {k}) leaves its disk"))?;
            count += 1;
        }
    }
    Ok(format!("{count} fractions contained"))
}

fn extremal_triangle() -> Outcome {
    let start = Instant::now();
    let r = treug_search(2000).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let s = 2f64.sqrt();
    ensure((r.max_area - 1.0).abs() <= 1e-3, || format!("area {}", r.max_area))?;
    let [a, b, c] = [r.argmax.a, r.argmax.b, r.argmax.c];
    ensure(
        (a - s).abs() <= 1e-2 && (b - s).abs() <= 1e-2 && (c - 2.0).abs() <= 1e-2,
        || format!("argmax ({a}, {b}, {c})"),
    )?;
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("area {:.6} at ({a}, {b}, {c}) in {elapsed:.2?}", r.max_area))
}

fn uniqueness_finitized() -> Outcome {
    let zero = Dyadic::zero();
    let base = export_table(8, Encoding::Dyadic).map_err(|e| e.to_string())?;
    let reference = samples(8).map_err(|e| e.to_string())?;
    let moves = [
        Isometry::identity(),
        Isometry::dyadic(0, false, &Point::from_ints(5, 7)),
        Isometry::dyadic(2, false, &Point::from_ints(-3, 1)),
        Isometry::dyadic(4, false, &Point::new(Dyadic::new(1, 3), Dyadic::zero())),
        // Reflection across x = 1.
        Isometry::dyadic(4, true, &Point::from_ints(2, 0)),
    ];
    for (m, iso) in moves.iter().enumerate() {
        let table: CandidateTable =
            base.map_points(|p| iso.apply_exact(p).expect("dyadic image"));
        let v = certify(&table, &zero).map_err(|e| e.to_string())?;
        ensure(v.pass, || {
            format!("isometry {m} ({iso}) rejected: {:?}", v.first_violation)
        })?;
        let found = v.isometry.ok_or("no isometry reported")?;
        ensure(found == iso.inverse(), || {
            format!("isometry {m}: reported {found}, expected {}", iso.inverse())
        })?;
        for (p, s) in table.points.iter().zip(&reference) {
            ensure(found.apply_exact(p).as_ref() == Some(s), || {
                format!("isometry {m} misaligns {p}")
            })?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut false_passes = 0u32;
    let mut tried = 0u32;
    while tried < 100 {
        let dx = Dyadic::new(rng.gen_range(-256i64..=256), 10);
        let dy = Dyadic::new(rng.gen_range(-256i64..=256), 10);
        // |d|^2 >= 1/400.
        if (&dx.square() + &dy.square()) * Dyadic::from(400) < Dyadic::one() {
            continue;
        }
        tried += 1;
        let i = rng.gen_range(0..base.len());
        let mut table = base.clone();
        let p = &table.points[i];
        table.points[i] = Point::new(&p.x + &dx, &p.y + &dy);
        let v = certify(&table, &zero).map_err(|e| e.to_string())?;
        if v.pass {
            false_passes += 1;
        }
    }
    ensure(false_passes == 0, || format!("{false_passes} perturbed tables passed"))?;
    Ok(format!(
        "{} isometries accepted, {tried} perturbations rejected",
        moves.len()
    ))
}

fn hilbert_comparison() -> Outcome {
    let h = rival_locality(RivalCurveId::Hilbert, 12).map_err(|e| e.to_string())?;
    let s = locality_dyadic(12).map_err(|e| e.to_string())?;
    ensure(s.attained_max == four(), || format!("SK max {}", s.attained_max))?;
    ensure(h.attained_max > s.attained_max, || {
        format!("Hilbert max {}", h.attained_max)
    })?;
    Ok(format!("Hilbert {} > SK 4 at depth 12", h.attained_max))
}

fn tiling_depth_12() -> Outcome {
    let tiles = tiling(12).map_err(|e| e.to_string())?;
    let total = tiles.iter().fold(Dyadic::zero(), |acc, f| acc + f.area());
    ensure(total == Dyadic::one(), || format!("area sum {total}"))?;
    let junctions = tiles.windows(2).filter(|w| w[0].exit == w[1].entry).count();
    ensure(junctions == 4095, || format!("{junctions} of 4095 junctions chain"))?;
    Ok(format!("{} fractions, area 1, 4095 junctions chain", tiles.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("exhaustive locality at depth 10", exhaustive_depth_10),
        ("attained locality 4 at depths 1..12", attained_four_all_depths),
        ("certified upper bound", certified_bound),
        ("fraction geometry", fraction_geometry),
        ("angle inequality", angle_inequality),
        ("disk corollary", disk_corollary),
        ("extremal triangle", extremal_triangle),
        ("finitized uniqueness", uniqueness_finitized),
        ("Hilbert comparison", hilbert_comparison),
        ("tiling at order 12", tiling_depth_12),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
