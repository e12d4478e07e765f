use ldb_core::clifford::CliffordAlgebra;
use ldb_core::forms::{isometry_check, ArfTriviality};
use ldb_core::{Field, Matrix, QuadraticForm, Scalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fields() -> Vec<Field> {
    ["Q", "F7", "GF(9)", "F2(t)", "F3(t)"]
        .iter()
        .map(|d| Field::parse_descriptor(d).unwrap())
        .collect()
}

fn odd_fields() -> Vec<Field> {
    ["Q", "F7", "GF(9)", "F3(t)"]
        .iter()
        .map(|d| Field::parse_descriptor(d).unwrap())
        .collect()
}

fn elems(f: &Field, seed: u64, k: usize) -> Vec<Scalar> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| f.random(&mut rng, 2)).collect()
}

fn random_form(f: &Field, n: usize, seed: u64) -> QuadraticForm {
    QuadraticForm::from_upper(f, n, &elems(f, seed, n * (n + 1) / 2)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn field_axioms(which in 0usize..5, seed: u64) {
        let f = &fields()[which];
        let v = elems(f, seed, 3);
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(&f.add(a, b), c), f.add(a, &f.add(b, c)));
        prop_assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
        prop_assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
        prop_assert!(f.is_zero(&f.sub(a, a)));
        if !f.is_zero(a) {
            prop_assert!(f.is_one(&f.mul(a, &f.inv(a).unwrap())));
        }
        for x in [a, b, c] {
            prop_assert!(f.is_canonical(x));
        }
    }

    #[test]
    fn render_parse_round_trip(which in 0usize..5, seed: u64) {
        let f = &fields()[which];
        for x in elems(f, seed, 4) {
            let text = f.render(&x);
            prop_assert_eq!(f.parse(&text).unwrap(), x);
        }
    }

    #[test]
    fn squares_are_recognized(which in 0usize..5, seed: u64) {
        let f = &fields()[which];
        let x = &elems(f, seed, 1)[0];
        let sq = f.square(x);
        let r = f.is_square(&sq);
        prop_assert!(r.is_some());
        prop_assert_eq!(f.square(&r.unwrap()), sq);
    }

    #[test]
    fn linear_solve_and_kernel(which in 0usize..5, seed: u64) {
        let f = &fields()[which];
        let e = elems(f, seed, 12);
        let a = Matrix::new(f, 3, 4, e).unwrap();
        for v in a.kernel_basis() {
            prop_assert!(a.mul_vec(&v).iter().all(|c| f.is_zero(c)));
        }
        prop_assert_eq!(a.rank() + a.kernel_basis().len(), 4);
        let x = elems(f, seed ^ 1, 4);
        let b = a.mul_vec(&x);
        let sol = a.solve(&b).unwrap().expect("consistent by construction");
        prop_assert_eq!(a.mul_vec(&sol), b);
        let sq = Matrix::new(f, 3, 3, elems(f, seed ^ 2, 9)).unwrap();
        if let Some(inv) = sq.inverse().unwrap() {
            prop_assert!(sq.mul(&inv).is_identity());
            prop_assert!(!f.is_zero(&sq.determinant().unwrap()));
        } else {
            prop_assert!(f.is_zero(&sq.determinant().unwrap()));
        }
    }

    #[test]
    fn polar_identity(which in 0usize..5, seed: u64) {
        let f = &fields()[which];
        let q = random_form(f, 3, seed);
        let x = elems(f, seed ^ 3, 3);
        let y = elems(f, seed ^ 4, 3);
        let s: Vec<Scalar> = x.iter().zip(&y).map(|(a, b)| f.add(a, b)).collect();
        let want = f.sub(&f.sub(&q.eval(&s), &q.eval(&x)), &q.eval(&y));
        prop_assert_eq!(q.polar(&x, &y), want);
        prop_assert_eq!(q.polar(&x, &x), f.mul(&f.from_i64(2), &q.eval(&x)));
    }

    #[test]
    fn reflections_are_involutive_isometries(which in 0usize..4, seed: u64) {
        let f = &odd_fields()[which];
        let q = random_form(f, 3, seed);
        let a = elems(f, seed ^ 5, 3);
        prop_assume!(!f.is_zero(&q.eval(&a)));
        let r = q.reflection_matrix(&a).unwrap();
        prop_assert!(r.mul(&r).is_identity());
        prop_assert!(isometry_check(&q, &q, &r));
        let minus: Vec<Scalar> = a.iter().map(|c| f.neg(c)).collect();
        prop_assert_eq!(r.mul_vec(&a), minus);
    }

    #[test]
    fn diagonalization_round_trips(which in 0usize..4, seed: u64) {
        let f = &odd_fields()[which];
        let q = random_form(f, 4, seed);
        let (p, d) = q.diagonalize().unwrap();
        let diag = QuadraticForm::diagonal(f, &d);
        prop_assert!(isometry_check(&diag, &q, &p));
    }

    #[test]
    fn clifford_is_associative(which in 0usize..5, seed: u64) {
        let f = &fields()[which];
        let q = random_form(f, 3, seed);
        let c = CliffordAlgebra::new(&q);
        let coords = |s: u64| c.from_coords(&elems(f, s, c.dim()));
        let (u, v, w) = (coords(seed ^ 6), coords(seed ^ 7), coords(seed ^ 8));
        prop_assert_eq!(c.mul(&c.mul(&u, &v), &w), c.mul(&u, &c.mul(&v, &w)));
        // x^2 = q(x)
        let x = elems(f, seed ^ 9, 3);
        let xv = c.vector(&x);
        prop_assert_eq!(c.mul(&xv, &xv), c.scalar(&q.eval(&x)));
    }

    #[test]
    fn scaling_scales_the_discriminant_class(which in 0usize..4, seed: u64) {
        let f = &odd_fields()[which];
        let q = random_form(f, 2, seed);
        prop_assume!(q.is_nondegenerate());
        let c = &elems(f, seed ^ 10, 1)[0];
        prop_assume!(!f.is_zero(c));
        // even dimension: disc(cq) = c^2 disc(q)
        let d1 = q.discriminant().unwrap();
        let d2 = q.scale(c).unwrap().discriminant().unwrap();
        prop_assert!(f.is_square(&f.div(&d2, &d1).unwrap()).is_some());
    }
}

#[test]
fn arf_of_one_one() {
    let f2 = Field::parse_descriptor("F2").unwrap();
    let q = QuadraticForm::binary_char2(&f2, &f2.one(), &f2.one()).unwrap();
    let rep = q.arf_invariant().unwrap();
    assert_eq!(q.arf_is_trivial(&rep).unwrap(), ArfTriviality::Nontrivial);

    let f4 = Field::parse_descriptor("GF(4)").unwrap();
    let q = QuadraticForm::binary_char2(&f4, &f4.one(), &f4.one()).unwrap();
    let rep = q.arf_invariant().unwrap();
    assert!(matches!(q.arf_is_trivial(&rep).unwrap(), ArfTriviality::Trivial { .. }));
}
