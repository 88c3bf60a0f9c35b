//! Build a Gaussian mixture with mixed cluster sizes and spreads, write it
//! to disk and read it back.

use ksplits::data::{
    generate_mixture, load_labels, load_matrix_auto, save_labels, save_matrix, ComponentSpec,
    Spread, SyntheticSpec,
};

fn main() -> ksplits::Result<()> {
    let spec = SyntheticSpec {
        n_points: 700,
        dim: 2,
        clusters: vec![
            ComponentSpec {
                count: 500,
                mean: vec![0.0, 0.0],
                std: Spread::Isotropic(3.0),
            },
            ComponentSpec {
                count: 150,
                mean: vec![25.0, 5.0],
                std: Spread::PerAxis(vec![4.0, 0.5]),
            },
            ComponentSpec {
                count: 50,
                mean: vec![10.0, 30.0],
                std: Spread::Isotropic(1.0),
            },
        ],
        seed: 42,
    };
    let ds = generate_mixture(&spec)?;

    let dir = std::env::temp_dir().join("ksplits-synthetic-example");
    std::fs::create_dir_all(&dir).map_err(|e| ksplits::Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    let points = dir.join("mixture.txt");
    let labels = dir.join("mixture.labels");
    save_matrix(&points, &ds.data)?;
    save_labels(&labels, ds.truth.as_deref().unwrap())?;

    let back = load_matrix_auto(&points)?;
    let truth = load_labels(&labels)?;
    println!("wrote {} and {}", points.display(), labels.display());
    println!(
        "reloaded {} x {} points, {} labels",
        back.rows(),
        back.cols(),
        truth.len()
    );
    for c in 0..3 {
        let members: Vec<usize> = (0..truth.len()).filter(|&i| truth[i] == c).collect();
        let mean_x = members.iter().map(|&i| back.get(i, 0)).sum::<f64>() / members.len() as f64;
        let mean_y = members.iter().map(|&i| back.get(i, 1)).sum::<f64>() / members.len() as f64;
        println!(
            "cluster {c}: {:3} points, sample mean ({mean_x:.2}, {mean_y:.2})",
            members.len()
        );
    }
    Ok(())
}
