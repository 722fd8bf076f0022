use birat::instance::{Instance, BUILTIN_NAMES};

#[test]
fn builtins_load_and_check_inverse() {
    for key in BUILTIN_NAMES {
        let inst = Instance::builtin(key).unwrap_or_else(|e| panic!("{key}: {e}"));
        assert_eq!(inst.map.check_inverse().unwrap(), Some(true), "{key}");
        assert_eq!(inst.seed.degree(), 1);
    }
}

#[test]
fn gamma_override() {
    let inst = Instance::builtin_with("khk-euler", &[("gamma", "1")]).unwrap();
    assert_eq!(inst.parameter("gamma").unwrap().to_string(), "1");
    assert!(Instance::builtin_with("khk-euler", &[("delta", "1")]).is_err());
    assert!(Instance::builtin("nope").is_err());
}
