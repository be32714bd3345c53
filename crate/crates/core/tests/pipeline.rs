use std::fs;
use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};

use crashbench::deck::{parse_starter_mesh, DeckBundle};
use crashbench::mesh::mesh_for_design;
use crashbench::solver::ExternalSolver;
use crashbench::{
    create_problem, Error, ErrorCategory, ObjectiveKind, ProblemId, ProblemInstance, RunSettings, SolverMode,
};

fn script(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
    fs::set_permissions(&path, fs::Permissions::from_mode(0o755)).unwrap();
    path
}

fn instance(id: ProblemId, d: usize, solver: SolverMode, root: &Path) -> ProblemInstance {
    let p = create_problem(id, d, &ObjectiveKind::ALL, solver).unwrap();
    p.with_settings(RunSettings {
        work_root: root.to_path_buf(),
        keep_work_dirs: true,
        ..RunSettings::default()
    })
}

fn external(wrapper: PathBuf) -> SolverMode {
    SolverMode::External(ExternalSolver::from_path(&wrapper))
}

#[test]
fn external_wrapper_reproduces_mock_results() {
    let tmp = tempfile::tempdir().unwrap();
    let x = [0.5, -1.5, 2.0, 3.0];
    let mock = instance(ProblemId::StarBox, 4, SolverMode::Mock, &tmp.path().join("mock"));
    let reference = mock.evaluate(&x).unwrap();
    let csv = reference.work_dir.join("StarBox_th.csv");
    assert!(csv.is_file());

    // engine stage drops the reference history where the solver would
    let wrapper = script(
        tmp.path(),
        "solver.sh",
        &format!(
            "case \"$2\" in *_0001.rad) cp '{}' StarBox_th.csv ;; esac\necho \"ran $2 with $4 threads\"",
            csv.display()
        ),
    );
    let ext = instance(ProblemId::StarBox, 4, external(wrapper), &tmp.path().join("ext"));
    let r = ext.evaluate(&x).unwrap();
    assert_eq!(r.raw, reference.raw);
    assert_eq!(r.to_key_values(), reference.to_key_values());
    let log = fs::read_to_string(r.work_dir.join("engine.log")).unwrap();
    assert_eq!(log.trim(), "ran StarBox_0001.rad with 1 threads");
}

#[test]
fn failing_solver_keeps_work_dir() {
    let tmp = tempfile::tempdir().unwrap();
    let wrapper = script(tmp.path(), "bad.sh", "echo 'ERROR: negative volume' >&2\nexit 7");
    let root = tmp.path().join("work");
    let p = instance(ProblemId::ThreePointBending, 3, external(wrapper), &root);
    let err = p.evaluate(&[0.0, 0.0, 0.0]).unwrap_err();
    assert_eq!(err.category(), ErrorCategory::Solver);
    let msg = err.to_string();
    assert!(msg.contains("starter") && msg.contains("negative volume"), "{msg}");
    let dirs: Vec<_> = fs::read_dir(&root).unwrap().collect();
    assert_eq!(dirs.len(), 1);
    let dir = dirs[0].as_ref().unwrap().path();
    assert!(dir.join("ThreePointBending_0000.rad").is_file());
}

#[test]
fn malformed_history_is_a_parse_error() {
    let tmp = tempfile::tempdir().unwrap();
    let wrapper = script(
        tmp.path(),
        "garbage.sh",
        "printf 'time_ms,contact_force_kN\\n0,1\\n' > LongCrashTube_th.csv",
    );
    let p = instance(ProblemId::LongCrashTube, 2, external(wrapper), &tmp.path().join("w"));
    let err = p.evaluate(&[0.0, 0.0]).unwrap_err();
    assert_eq!(err.category(), ErrorCategory::Parse, "{err}");
}

#[test]
fn out_of_domain_is_rejected_not_clamped() {
    let p = create_problem(ProblemId::StarBox, 2, &[ObjectiveKind::Mass], SolverMode::Mock).unwrap();
    assert_eq!(p.denormalize(&[-5.0, 5.0]).unwrap(), vec![60.0, 120.0]);
    match p.evaluate(&[0.0, 5.000001]) {
        Err(Error::OutOfDomain { index, .. }) => assert_eq!(index, 2),
        other => panic!("{other:?}"),
    }
    assert!(matches!(p.evaluate(&[0.0, f64::NAN]), Err(Error::OutOfDomain { .. })));
    assert!(matches!(p.evaluate(&[0.0]), Err(Error::WrongLength { expected: 2, got: 1 })));
}

#[test]
fn normalize_inverts_denormalize() {
    for id in ProblemId::ALL {
        for d in [1, 3, 4, 15, id.max_dim()] {
            let p = create_problem(id, d, &[id.default_objective()], SolverMode::Mock).unwrap();
            let x: Vec<f64> = (0..d).map(|i| (i as f64 * 0.37).sin() * 5.0).collect();
            let back = p.normalize(&p.denormalize(&x).unwrap()).unwrap();
            for (a, b) in x.iter().zip(&back) {
                assert!((a - b).abs() < 1e-12, "{id:?} d={d}");
            }
        }
    }
}

#[test]
fn written_deck_round_trips_to_the_design_mesh() {
    let tmp = tempfile::tempdir().unwrap();
    let x = [1.0, -2.0, 0.5, 4.0, -4.0];
    for id in ProblemId::ALL {
        let p = instance(id, 5, SolverMode::Mock, tmp.path());
        let r = p.evaluate(&x).unwrap();
        let text = fs::read_to_string(r.work_dir.join(DeckBundle::starter_file_name(id.name()))).unwrap();
        let parsed = parse_starter_mesh(&text).unwrap();
        let mesh = mesh_for_design(id, 5, &r.x_physical).unwrap();
        assert_eq!(parsed.elements, mesh.elements);
        // the deck carries 15 significant digits
        assert_eq!(parsed.parts.len(), mesh.parts.len());
        for (a, b) in parsed.parts.iter().zip(&mesh.parts) {
            assert_eq!(a.0, b.0);
            assert!((a.1 - b.1).abs() <= 1e-14 * b.1);
        }
        for (a, b) in parsed.nodes.iter().zip(&mesh.nodes) {
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() <= 1e-12 * b[k].abs().max(1.0));
            }
        }
    }
}

#[test]
fn work_dirs_are_removed_unless_kept() {
    let tmp = tempfile::tempdir().unwrap();
    let p = create_problem(ProblemId::StarBox, 1, &[ObjectiveKind::Mass], SolverMode::Mock)
        .unwrap()
        .with_settings(RunSettings {
            work_root: tmp.path().to_path_buf(),
            ..RunSettings::default()
        });
    let r = p.evaluate(&[1.0]).unwrap();
    assert!(!r.work_dir.exists());
    assert_eq!(fs::read_dir(tmp.path()).unwrap().count(), 0);
}
