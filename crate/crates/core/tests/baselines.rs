use ldmd::baselines::{fit_pod_rbf, fom_sample_steps, predict_pod_rbf, Kernel};
use ldmd::dmd::{ObservableMap, RankSpec};
use ldmd::fom::{Equation, FomProblem};
use ldmd::harness::relative_error;
use ldmd::ldmd::{run_pldmd, Schedule};

/// With a well-conditioned kernel POD-RBF reproduces each sample up to its
/// POD projection error; the default Gaussian is flagged as regularized.
#[test]
fn pod_rbf_reproduces_samples_up_to_projection() {
    for equation in [Equation::Burgers, Equation::AllenCahn, Equation::Nlse, Equation::MaxwellTm] {
        let p = FomProblem::benchmark(equation);
        let reference = p.reference_trajectory().unwrap();
        let schedule = Schedule::uniform(20, p.n_steps, 0.5).unwrap();
        let run = run_pldmd(&p, &schedule, RankSpec::Fixed(10), ObservableMap::identity(p.state_dim())).unwrap();
        let steps = fom_sample_steps(&run);
        let states: Vec<_> = steps.iter().map(|&k| &reference[k]).collect();
        let times: Vec<f64> = steps.iter().map(|&k| p.time(k)).collect();

        let model = fit_pod_rbf(&states, &times, 20, Kernel::Linear).unwrap();
        assert!(!model.regularized, "{equation:?}");
        let basis_h = model.pod_basis.adjoint();
        for &k in &steps {
            let u = &reference[k];
            let projected = model.pod_basis.mul_vec(&basis_h.mul_vec(u));
            let floor = relative_error(&projected, u).value;
            let re = relative_error(&predict_pod_rbf(&model, p.time(k)), u).value;
            assert!(re <= floor + 1e-6, "{equation:?} step {k}: {re:e} vs projection {floor:e}");
            if equation != Equation::MaxwellTm {
                assert!(re <= 1e-6, "{equation:?} step {k}: {re:e}");
            }
        }
        if equation == Equation::Burgers {
            assert!(fit_pod_rbf(&states, &times, 20, Kernel::default()).unwrap().regularized);
        }
    }
}
