use loglie_core::group::{geometric_cov, min_eigenvalue, vectorize};
use loglie_core::sample::{random_corr, random_in, random_spd, random_sym, CounterRng};
use loglie_core::symlin::{mat_exp, spd_inverse, sym_eig};
use loglie_core::{
    is_inverse_consistent, le_mean, le_variance, Error, GroupElem, LeChart, LogScalingChart,
    OffLogChart, SpdChart, Subspace, SymMat,
};

fn e() -> f64 {
    1f64.exp()
}

fn close(a: &SymMat<f64>, b: &SymMat<f64>, tol: f64) -> bool {
    (a - b).max_abs() <= tol
}

#[test]
fn identity_element_is_neutral_in_every_chart() {
    let mut rng = CounterRng::new(1);
    let charts: Vec<Box<dyn LeChart<f64>>> = vec![
        Box::new(SpdChart::new(4).unwrap()),
        Box::new(OffLogChart::new(4).unwrap()),
        Box::new(LogScalingChart::new(4).unwrap()),
    ];
    for ch in &charts {
        let id = ch.inv(&SymMat::zeros(4)).unwrap();
        assert!(close(&id, &ch.identity(), 1e-15));
        let x = match ch.model() {
            Subspace::Full => random_spd(&mut rng, 4, 0.5),
            _ => random_corr(&mut rng, 4, 0.5),
        };
        assert!(close(&ch.star(&id, &x).unwrap(), &x, 1e-12), "{}", ch.name());
    }
}

#[test]
fn geodesic_examples() {
    let spd = SpdChart::new(3).unwrap();
    let mut rng = CounterRng::new(2);
    let sigma = random_spd::<f64>(&mut rng, 3, 0.5);
    let mid = spd.geodesic(&SymMat::identity(3), &sigma, 0.5).unwrap();
    let squared = SymMat::symmetrize(mid.matmul(&mid));
    assert!(close(&squared, &sigma, 1e-12));

    let spd2 = SpdChart::new(2).unwrap();
    let b = SymMat::from_diag(&[e(), e() * e()]);
    let far = spd2.geodesic(&SymMat::identity(2), &b, 2.0).unwrap();
    let want = SymMat::from_diag(&[e().powi(2), e().powi(4)]);
    assert!(close(&far, &want, 1e-12));

    let ol = OffLogChart::<f64>::new(4).unwrap();
    let a = random_corr::<f64>(&mut rng, 4, 0.5);
    let c = random_corr::<f64>(&mut rng, 4, 0.5);
    for t in [0.0, 0.3, 1.0, 1.7] {
        let fwd = ol.geodesic(&a, &c, t).unwrap();
        let bwd = ol.geodesic(&c, &a, 1.0 - t).unwrap();
        assert!(close(&fwd, &bwd, 1e-12));
    }
    assert!(close(&ol.geodesic(&a, &c, 0.0).unwrap(), &a, 1e-12));
    assert!(close(&ol.geodesic(&a, &c, 1.0).unwrap(), &c, 1e-12));
}

#[test]
fn distance_examples() {
    let spd = SpdChart::new(3).unwrap();
    let mut rng = CounterRng::new(3);
    let s = random_sym::<f64>(&mut rng, 3, 1.0);
    for t in [-1.5, 0.25, 2.0] {
        let d = spd.dist(&SymMat::identity(3), &mat_exp(&s.scale(t)).unwrap()).unwrap();
        assert!((d - t.abs() * s.fro_norm()).abs() < 1e-12);
    }
    let ls = LogScalingChart::<f64>::new(3).unwrap();
    let a = random_corr::<f64>(&mut rng, 3, 0.5);
    let b = random_corr::<f64>(&mut rng, 3, 0.5);
    let c = random_corr::<f64>(&mut rng, 3, 0.5);
    let d0 = ls.dist(&a, &b).unwrap();
    let d1 = ls.dist(&ls.star(&a, &c).unwrap(), &ls.star(&b, &c).unwrap()).unwrap();
    assert!((d0 - d1).abs() < 1e-10);
    assert!(ls.dist(&a, &a).unwrap() < 1e-15);
    assert!(d0 <= ls.dist(&a, &c).unwrap() + ls.dist(&c, &b).unwrap());
}

#[test]
fn mean_and_variance_examples() {
    let spd = SpdChart::new(2).unwrap();
    let a = GroupElem::new(&spd, SymMat::from_rows(&[[2.0, 0.5], [0.5, 1.0]]).unwrap()).unwrap();
    let pair = [a.clone(), a.inverse().unwrap()];
    let m = le_mean(&pair).unwrap();
    assert!(close(m.value(), &SymMat::identity(2), 1e-14));
    let log_norm = a.log().unwrap().fro_norm();
    assert!((le_variance(&pair).unwrap() - log_norm * log_norm).abs() < 1e-12);

    let single = le_mean(std::slice::from_ref(&a)).unwrap();
    assert!(close(single.value(), a.value(), 1e-14));
    assert_eq!(le_variance(std::slice::from_ref(&a)).unwrap(), 0.0);

    let two = [
        GroupElem::identity(&spd),
        GroupElem::new(&spd, SymMat::from_diag(&[e() * e(), 1.0])).unwrap(),
    ];
    let m = le_mean(&two).unwrap();
    assert!(close(m.value(), &SymMat::from_diag(&[e(), 1.0]), 1e-14));
    assert!(matches!(le_mean::<f64>(&[]), Err(Error::EmptySample)));
}

#[test]
fn mean_is_translation_equivariant() {
    let ol = OffLogChart::<f64>::new(3).unwrap();
    let mut rng = CounterRng::new(4);
    let xs: Vec<_> = (0..4)
        .map(|_| GroupElem::new(&ol, random_corr(&mut rng, 3, 0.5)).unwrap())
        .collect();
    let c = GroupElem::new(&ol, random_corr(&mut rng, 3, 0.5)).unwrap();
    let moved: Vec<_> = xs.iter().map(|x| x.star(&c).unwrap()).collect();
    let lhs = le_mean(&moved).unwrap();
    let rhs = le_mean(&xs).unwrap().star(&c).unwrap();
    assert!(close(lhs.value(), rhs.value(), 1e-10));
}

#[test]
fn mixing_charts_is_rejected() {
    let ol = OffLogChart::<f64>::new(2).unwrap();
    let ls = LogScalingChart::<f64>::new(2).unwrap();
    let a = GroupElem::identity(&ol);
    let b = GroupElem::identity(&ls);
    assert!(matches!(a.star(&b), Err(Error::ChartMismatch { .. })));
    assert!(matches!(le_mean(&[a, b]), Err(Error::ChartMismatch { .. })));
    let bad = SymMat::from_diag(&[2.0, 1.0]);
    assert!(GroupElem::new(&ol, bad).is_err());
}

#[test]
fn vectorization_is_isometric() {
    let mut rng = CounterRng::new(5);
    for space in [Subspace::Full, Subspace::Hollow, Subspace::RowZero, Subspace::Diagonal] {
        for n in 2..6 {
            let s = random_in::<f64>(&mut rng, space, n, 1.0);
            let v = vectorize(space, &s);
            assert_eq!(v.len(), space.dim(n));
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - s.fro_norm()).abs() < 1e-13, "{space:?}");
        }
    }
}

fn sample<'a>(chart: &'a dyn LeChart<f64>, rng: &mut CounterRng, len: usize) -> Vec<GroupElem<'a, f64>> {
    (0..len)
        .map(|_| {
            let x = match chart.model() {
                Subspace::Full => random_spd(rng, chart.dim(), 0.5),
                _ => random_corr(rng, chart.dim(), 0.5),
            };
            GroupElem::new(chart, x).unwrap()
        })
        .collect()
}

#[test]
fn covariance_examples() {
    let spd = SpdChart::new(3).unwrap();
    let ls = LogScalingChart::<f64>::new(4).unwrap();
    let mut rng = CounterRng::new(6);
    let g = sample(&spd, &mut rng, 12);
    let h = sample(&ls, &mut rng, 12);

    let same = geometric_cov(&g, &g).unwrap();
    assert!(same.gh.sub(&same.gg).max_abs() < 1e-15);
    let rho = same.correlation().unwrap();
    for i in 0..rho.rows() {
        assert!((rho.get(i, i) - 1.0).abs() < 1e-12);
    }

    let cov = geometric_cov(&g, &h).unwrap();
    assert_eq!((cov.gg.rows(), cov.hh.rows(), cov.gh.cols()), (6, 6, 6));
    let swapped = geometric_cov(&h, &g).unwrap();
    assert!(swapped.gh.sub(&cov.gh.transpose()).max_abs() < 1e-15);
    for m in [&cov.gg, &cov.hh] {
        let tr: f64 = (0..m.rows()).map(|i| m.get(i, i)).sum();
        assert!(min_eigenvalue(m).unwrap() >= -1e-10 * tr);
    }
    for i in 0..6 {
        for j in 0..6 {
            assert!(cov.gh.get(i, j).powi(2) <= cov.gg.get(i, i) * cov.hh.get(j, j) * (1.0 + 1e-12));
        }
    }

    let a = sample(&spd, &mut rng, 1).remove(0);
    let b = sample(&ls, &mut rng, 1).remove(0);
    let ga: Vec<_> = g.iter().map(|x| x.star(&a).unwrap()).collect();
    let hb: Vec<_> = h.iter().map(|x| x.star(&b).unwrap()).collect();
    let moved = geometric_cov(&ga, &hb).unwrap();
    for (x, y) in [(&moved.gg, &cov.gg), (&moved.hh, &cov.hh), (&moved.gh, &cov.gh)] {
        assert!(x.sub(y).max_abs() < 1e-12);
    }

    let constant = vec![g[0].clone(); 5];
    let zero = geometric_cov(&constant, &constant).unwrap();
    assert!(zero.gg.max_abs() < 1e-15);
    assert!(matches!(zero.correlation(), Err(Error::SingularDiag { index: 0 })));
    assert!(matches!(geometric_cov(&g, &h[..3]), Err(Error::LengthMismatch { .. })));
}

#[test]
fn inverse_consistency_examples() {
    let ol = OffLogChart::<f64>::new(3).unwrap();
    let ident = is_inverse_consistent(|x| Ok(x.clone()), &ol, 10, 7).unwrap();
    assert!(ident.consistent);
    let inv = is_inverse_consistent(|x| ol.group_inverse(x), &ol, 10, 7).unwrap();
    assert!(inv.consistent);
    let c = random_corr::<f64>(&mut CounterRng::new(8), 3, 0.5);
    let shift = is_inverse_consistent(|x| ol.star(x, &c), &ol, 10, 7).unwrap();
    assert!(!shift.consistent);
    let want = 2.0 * ol.fwd(&c).unwrap().fro_norm();
    assert!((shift.max_violation - want).abs() < 1e-9);
}

#[test]
fn spd_group_inverse_is_matrix_inverse() {
    let spd = SpdChart::new(5).unwrap();
    let s = random_spd::<f64>(&mut CounterRng::new(9), 5, 0.5);
    let gi = spd.group_inverse(&s).unwrap();
    assert!(close(&gi, &spd_inverse(&s).unwrap(), 1e-10));
    let eig = sym_eig(&s).unwrap();
    assert!(eig.orthogonality_defect() < 1e-13);
}
