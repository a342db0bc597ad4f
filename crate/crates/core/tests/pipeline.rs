use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lefschetz::fibration::{Base, Direction, LefschetzData};
use lefschetz::homology::{HomologyClass, SurfaceSig, SympMatrix};
use lefschetz::planner::{genus2_chain_model, plan_closed_embedding, plan_weinstein_embedding, verify, PlanOptions};
use lefschetz::words::{humphries_system, Curve, TwistLetter, TwistWord};

/// The odd chain relation on genus 3: seven curves, eighth power.
fn genus3_chain() -> LefschetzData {
    let rows: [[i64; 6]; 7] = [
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [1, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 1, 0, 1, 0],
        [0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 1, 0],
    ];
    let fiber = SurfaceSig::closed(3);
    let cycles = (0..8)
        .flat_map(|_| rows.iter().enumerate())
        .map(|(i, r)| Curve::new(format!("c{}", i + 1), HomologyClass::from_i64s(r).unwrap(), fiber).unwrap())
        .collect();
    LefschetzData::new(Base::Sphere, fiber, cycles, "genus3-chain").unwrap()
}

fn random_moves(mut lf: LefschetzData, rng: &mut ChaCha8Rng, count: usize) -> LefschetzData {
    for _ in 0..count {
        let i = rng.gen_range(0..lf.cycles().len() - 1);
        let dir = if rng.gen() { Direction::Left } else { Direction::Right };
        lf = lf.hurwitz_move(i, dir).unwrap();
    }
    lf
}

/// A primitive class: the image of `a₁` under a random product of Humphries twists.
fn random_primitive(genus: u32, rng: &mut ChaCha8Rng) -> HomologyClass {
    let gens = humphries_system(genus, false).unwrap().transvections();
    let mut m = SympMatrix::identity(genus);
    for _ in 0..rng.gen_range(0..8) {
        let g = &gens[rng.gen_range(0..gens.len())];
        m = if rng.gen() { g * &m } else { &g.inverse() * &m };
    }
    m.apply(&HomologyClass::a(genus, 1)).unwrap()
}

fn random_word(system: &Arc<lefschetz::words::GeneratorSystem>, rng: &mut ChaCha8Rng) -> TwistWord {
    let letters = (0..rng.gen_range(0..10))
        .map(|_| {
            let c = &system.curves()[rng.gen_range(0..system.curves().len())];
            TwistLetter::new(c.name.clone(), if rng.gen() { 1 } else { -1 }).unwrap()
        })
        .collect();
    TwistWord::new(system.clone(), letters).unwrap()
}

#[test]
fn genus3_chain_closes() {
    assert!(genus3_chain().total_monodromy().is_identity());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn closed_plans_verify(seed in any::<u64>(), genus3 in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = if genus3 { genus3_chain() } else { genus2_chain_model() };
        let lf = random_moves(base, &mut rng, 12);
        let opts = PlanOptions { primes: vec![], ..PlanOptions::default() };
        let cert = plan_closed_embedding(&lf, &opts).unwrap();
        prop_assert_eq!(cert.per_cycle.len(), lf.cycles().len());
        let report = verify(&cert);
        prop_assert!(report.ok(), "{:?}", report.failures);
    }

    #[test]
    fn weinstein_plans_verify(seed in any::<u64>(), genus in 2u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fiber = SurfaceSig::bounded(genus);
        let cycles = (0..rng.gen_range(1..8))
            .map(|i| Curve::new(format!("v{i}"), random_primitive(genus, &mut rng), fiber).unwrap())
            .collect();
        let lf = LefschetzData::new(Base::Disk, fiber, cycles, "random").unwrap();
        let system = Arc::new(humphries_system(genus, true).unwrap());
        let words: Vec<_> = (0..rng.gen_range(0..3)).map(|_| random_word(&system, &mut rng)).collect();
        let opts = PlanOptions { primes: vec![], ..PlanOptions::default() };
        let cert = plan_weinstein_embedding(&lf, &words, &opts).unwrap();
        prop_assert_eq!(cert.global.boundary_discipline.len(), words.len());
        let report = verify(&cert);
        prop_assert!(report.ok(), "{:?}", report.failures);
    }

    #[test]
    fn certificates_survive_serialization(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lf = random_moves(genus2_chain_model(), &mut rng, 6);
        let cert = plan_closed_embedding(&lf, &PlanOptions::default()).unwrap();
        let json = cert.to_json();
        let back = lefschetz::planner::EmbeddingCertificate::from_json(&json).unwrap();
        prop_assert_eq!(&back, &cert);
        prop_assert_eq!(back.to_json(), json);
    }
}
