macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run_example().unwrap();
        }
    };
}

example!(classify_regimes);
example!(hubble_markers);
example!(evolve_reference);
example!(recollapse);
example!(lambda_inversion);
example!(radiation_shift);
example!(phase_sweep);
