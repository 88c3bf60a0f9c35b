use ksplits::data::{
    format_matrix, generate_mixture, load_labels, load_matrix, load_matrix_auto, load_result,
    parse_labels, parse_matrix, save_labels, save_matrix, save_result, ComponentSpec, MatrixFormat,
    Spread, SyntheticSpec,
};
use ksplits::numerics::squared_euclidean;
use ksplits::rng::SeededRng;
use ksplits::{ksplits_run, Error, KSplitsConfig, Matrix};

#[test]
fn parses_whitespace_and_csv() {
    let m = parse_matrix("0 0\n2 0\n", MatrixFormat::Whitespace).unwrap();
    assert_eq!(m, Matrix::from_rows(&[[0.0, 0.0], [2.0, 0.0]]).unwrap());
    let trailing = parse_matrix("0 0\n2 0\n\n\n", MatrixFormat::Whitespace).unwrap();
    assert_eq!(trailing, m);
    let csv = parse_matrix("0, 0\n2,0\n", MatrixFormat::Csv).unwrap();
    assert_eq!(csv, m);
    assert_eq!(MatrixFormat::detect("1,2\n"), MatrixFormat::Csv);
    assert_eq!(MatrixFormat::detect("1 2\n"), MatrixFormat::Whitespace);
}

#[test]
fn reports_parse_positions() {
    match parse_matrix("1 2\n3 x\n", MatrixFormat::Whitespace) {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 2)),
        other => panic!("{other:?}"),
    }
    match parse_matrix("1 2\n3 4 5\n", MatrixFormat::Whitespace) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        parse_matrix("\n\n", MatrixFormat::Whitespace),
        Err(Error::EmptyData)
    ));
}

#[test]
fn matrix_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = SeededRng::new(41);
    let values: Vec<f64> = (0..60)
        .map(|_| rng.normal(0.0, 1e3) * rng.uniform())
        .collect();
    let m = Matrix::new(20, 3, values).unwrap();
    let path = dir.path().join("m.txt");
    save_matrix(&path, &m).unwrap();
    let back = load_matrix(&path, MatrixFormat::Whitespace).unwrap();
    for (a, b) in m.as_slice().iter().zip(back.as_slice()) {
        assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }
    assert_eq!(load_matrix_auto(&path).unwrap(), back);
    assert_eq!(format_matrix(&back), format_matrix(&m));
}

#[test]
fn labels_are_shifted_to_zero() {
    assert_eq!(parse_labels("1\n1\n2\n").unwrap(), vec![0, 0, 1]);
    assert_eq!(parse_labels("0\n3\n").unwrap(), vec![0, 3]);
    let header = "VQ PARTITION FILE\nClusters: 2\n-----\n1\n2\n2\n";
    assert_eq!(parse_labels(header).unwrap(), vec![0, 1, 1]);
    assert!(parse_labels("a\n").is_err());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l.labels");
    save_labels(&path, &[2, 0, 1]).unwrap();
    assert_eq!(load_labels(&path).unwrap(), vec![2, 0, 1]);
}

#[test]
fn well_separated_mixture_is_classified_by_nearest_mean() {
    let means = vec![vec![0.0, 0.0], vec![100.0, 0.0]];
    let ds = generate_mixture(&SyntheticSpec::even(100, means.clone(), 1.0, 3)).unwrap();
    let truth = ds.truth.unwrap();
    for (p, &t) in ds.data.iter_rows().zip(&truth) {
        assert!(squared_euclidean(p, &means[t]) < 100.0);
        let nearest =
            usize::from(squared_euclidean(p, &means[1]) < squared_euclidean(p, &means[0]));
        assert_eq!(nearest, t);
    }
}

#[test]
fn generator_is_deterministic_and_counts_match() {
    let spec = SyntheticSpec {
        n_points: 10,
        dim: 2,
        clusters: vec![
            ComponentSpec {
                count: 3,
                mean: vec![0.0, 0.0],
                std: Spread::Isotropic(1.0),
            },
            ComponentSpec {
                count: 7,
                mean: vec![5.0, 5.0],
                std: Spread::PerAxis(vec![1.0, 0.1]),
            },
        ],
        seed: 9,
    };
    let a = generate_mixture(&spec).unwrap();
    let b = generate_mixture(&spec).unwrap();
    assert_eq!(format_matrix(&a.data), format_matrix(&b.data));
    let truth = a.truth.unwrap();
    assert_eq!(truth.iter().filter(|&&l| l == 0).count(), 3);
    assert_eq!(truth.iter().filter(|&&l| l == 1).count(), 7);

    let mut bad = spec.clone();
    bad.n_points = 11;
    assert!(generate_mixture(&bad).is_err());
    let mut bad = spec;
    bad.clusters[0].std = Spread::Isotropic(0.0);
    assert!(generate_mixture(&bad).is_err());
}

#[test]
fn sample_means_within_five_sigma() {
    let means = vec![vec![1.0, -4.0, 10.0], vec![-20.0, 3.0, 0.5]];
    let ds = generate_mixture(&SyntheticSpec::even(1000, means.clone(), 2.0, 12)).unwrap();
    let truth = ds.truth.unwrap();
    for (c, mean) in means.iter().enumerate() {
        let members: Vec<usize> = (0..1000).filter(|&i| truth[i] == c).collect();
        let bound = 5.0 * 2.0 / (members.len() as f64).sqrt();
        for (j, m) in mean.iter().enumerate() {
            let sample =
                members.iter().map(|&i| ds.data.get(i, j)).sum::<f64>() / members.len() as f64;
            assert!((sample - m).abs() <= bound);
        }
    }
}

#[test]
fn result_document_round_trip() {
    let ds = generate_mixture(&SyntheticSpec::even(
        300,
        vec![vec![0.0, 0.0], vec![30.0, 0.0], vec![0.0, 30.0]],
        1.0,
        4,
    ))
    .unwrap();
    let r = ksplits_run(&ds.data, &KSplitsConfig::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    save_result(&r, &path).unwrap();
    let doc = load_result(&path).unwrap();
    assert_eq!(doc.final_k, r.final_k);
    assert_eq!(doc.labels, r.labels);
    assert_eq!(doc.trace.len(), r.trace.len());
    assert_eq!(doc.selected_iteration, r.selected_iteration);
    assert_eq!(doc.config, r.config);
    assert!((doc.d_base - r.d_base).abs() <= 1e-12);
    assert!((doc.wall_time.unwrap() - r.wall_time).abs() <= 1e-12);
    for (a, b) in doc
        .centroids
        .iter()
        .flatten()
        .zip(r.centroids.iter().flatten())
    {
        assert!((a - b).abs() <= 1e-12);
    }
    for (e, s) in doc.trace.iter().zip(&r.trace) {
        assert_eq!(e.k, s.k);
        assert_eq!(e.j_k, s.j_k);
        assert_eq!(e.d, s.min_pair_distance);
        assert_eq!(e.ratio, s.ratio);
    }
}
