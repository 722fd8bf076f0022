use birat::darboux::{
    constrained_space, darboux_for_instance, pencil_identity, plane_identities, IndexConstraintQuery,
};
use birat::instance::Instance;
use birat::poly::{rational, Rational};

fn q(s: &str) -> Rational {
    rational(s).unwrap()
}

fn strings(inst: &Instance, d: u32) -> (Vec<String>, birat::darboux::DarbouxReport) {
    let query = IndexConstraintQuery::for_instance(inst, d).unwrap();
    let (b, r) = darboux_for_instance(inst, &query).unwrap();
    (b.strings(inst.variables()), r)
}

#[test]
fn dp1_linear_forms() {
    let inst = Instance::builtin("dp1-ercolani").unwrap();
    let (basis, r) = strings(&inst, 1);
    assert_eq!(basis, ["z"]);
    assert!(r.ok());
    assert_eq!(r.action_matrix().unwrap(), vec![vec![q("1")]]);
    assert!(r.discarded.is_empty());
}

#[test]
fn dp1_pencil() {
    let inst = Instance::builtin("dp1-ercolani").unwrap();
    let (basis, r) = strings(&inst, 2);
    assert_eq!(basis, ["x*w + y*w + z*w - w^2", "z^2"]);
    assert!(r.ok(), "{r:?}");
    assert_eq!(
        r.action_matrix().unwrap(),
        vec![vec![q("1"), q("0")], vec![q("2"), q("1")]]
    );
    for e in &r.elements {
        assert_eq!(e.indices, vec![2, 2, 2, 2]);
        assert_eq!(e.removed, vec![2, 0]);
    }
    eprintln!("{r:#?}");
}

#[test]
fn dp1_pencil_other_gamma() {
    let inst = Instance::builtin_with("dp1-ercolani", &[("gamma", "5")]).unwrap();
    let (_, r) = strings(&inst, 2);
    assert_eq!(
        r.action_matrix().unwrap(),
        vec![vec![q("1"), q("0")], vec![q("5"), q("1")]]
    );
}

#[test]
fn dp1_cubics_unconstrained() {
    let inst = Instance::builtin("dp1-ercolani").unwrap();
    let b = constrained_space(&inst.charts, 4, &IndexConstraintQuery::unconstrained(3)).unwrap();
    assert_eq!(b.dimension(), 20);
    for p in &b.basis {
        assert_eq!(p.poly().len(), 1);
    }
}

#[test]
fn constrained_elements_meet_their_bounds() {
    let inst = Instance::builtin("dp1-ercolani").unwrap();
    let query = IndexConstraintQuery::for_instance(&inst, 3).unwrap();
    let b = constrained_space(&inst.charts, 4, &query).unwrap();
    for p in &b.basis {
        for (chart, k) in &query.bounds {
            assert!(inst.charts.get(chart).unwrap().index(p.poly()).unwrap() >= *k);
        }
    }
    eprintln!("cubic dimension {}", b.dimension());
}

#[test]
fn khk_quadrics() {
    for (g, dim) in [("2", 2usize), ("3", 2), ("1", 3)] {
        let inst = Instance::builtin_with("khk-euler", &[("gamma", g)]).unwrap();
        let (basis, r) = strings(&inst, 2);
        assert_eq!(basis.len(), dim, "gamma {g}: {basis:?}");
        assert!(r.ok(), "gamma {g}: {r:?}");
        eprintln!("gamma {g}: {basis:?} {:?} discarded {:?}", r.action, r.discarded);
    }
    let inst = Instance::builtin_with("khk-euler", &[("gamma", "1")]).unwrap();
    let query = IndexConstraintQuery::for_instance(&inst, 2).unwrap();
    let b = constrained_space(&inst.charts, 4, &query).unwrap();
    assert!(b.contains(&inst.parse("X1*X3 + X2*X4").unwrap()));
    assert!(b.contains(&inst.parse("(X1 + X3)*(X2 + X4)").unwrap()));
}

#[test]
fn plane_identities_hold() {
    for g in ["1", "2"] {
        let inst = Instance::builtin_with("khk-euler", &[("gamma", g)]).unwrap();
        let checks = plane_identities(&inst.map.component_polys(), &q(g)).unwrap();
        assert_eq!(checks.len(), 4);
        assert!(checks.iter().all(|c| c.holds), "{checks:?}");
    }
}

#[test]
fn plane_identities_fail_for_perturbed_map() {
    let inst = Instance::builtin("khk-euler").unwrap();
    let mut comps = inst.map.component_polys();
    comps[0] = &comps[0] + &inst.parse("X1*X2*X3").unwrap();
    let checks = plane_identities(&comps, &q("2")).unwrap();
    assert!(checks.iter().any(|c| !c.holds));
    assert!(plane_identities(&comps[..3], &q("2")).is_err());
}

#[test]
fn pencil_shift() {
    let inst = Instance::builtin("dp1-ercolani").unwrap();
    for l in ["0", "1", "-3"] {
        assert!(pencil_identity(&inst.map, &q(l), &q("2")).unwrap(), "lambda {l}");
    }
    assert!(!pencil_identity(&inst.map, &q("0"), &q("1")).unwrap());
}

#[test]
fn khk_pencil_scales_by_gamma_squared() {
    for g in ["2", "3"] {
        let inst = Instance::builtin_with("khk-euler", &[("gamma", g)]).unwrap();
        let scale = |src: &str| {
            let p = birat::poly::HomogeneousPolynomial::new(inst.parse(src).unwrap()).unwrap();
            let r = inst.map.proper_pullback(&p).unwrap();
            let (m, c) = p.poly().leading_term().unwrap();
            let img = r.proper.poly().coefficient(&m) / c;
            assert_eq!(
                r.proper.poly(),
                &p.poly().scale(&img),
                "{src} is not an eigenvector"
            );
            img
        };
        let a = scale("(X1 + X3)*(X2 + X4)");
        let b = scale("(X1 - X3)*(X2 - X4)");
        assert_eq!(a / b, q(g) * q(g));
    }
}
