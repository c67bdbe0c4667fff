use std::path::Path;

use ctnn_core::config::sha256_bytes;
use ctnn_core::dataset::{make_frame, make_training_set, variant_seed};
use ctnn_core::nn::{read_weights, write_weights, Activation, DenseLayer, Mlp};
use ctnn_core::pgm::GrayImage;
use ctnn_core::thalamus::frame_bytes;
use ndarray::array;

#[test]
fn pgm_bytes() {
    let img = GrayImage::new(3, 2, vec![0, 1, 2, 253, 254, 255]).unwrap();
    let mut expected = b"P5\n3 2\n255\n".to_vec();
    expected.extend([0, 1, 2, 253, 254, 255]);
    assert_eq!(img.encode(), expected);
    assert_eq!(
        GrayImage::decode(&expected, Path::new("golden.pgm")).unwrap(),
        img
    );
}

#[test]
fn weight_file_bytes() {
    let net = Mlp::from_layers(vec![
        DenseLayer {
            weights: array![[1.0f32, -2.0]],
            biases: array![0.5],
            activation: Activation::Relu,
        },
        DenseLayer {
            weights: array![[0.25f32], [4.0]],
            biases: array![0.0, -1.0],
            activation: Activation::Sigmoid,
        },
    ])
    .unwrap();
    let mut bytes = Vec::new();
    write_weights(&net, &mut bytes).unwrap();

    let mut expected = b"CTNN1\n2 1 2\n".to_vec();
    for v in [1.0f32, -2.0, 0.5, 0.25, 4.0, 0.0, -1.0] {
        expected.extend(v.to_le_bytes());
    }
    assert_eq!(bytes, expected);
    assert_eq!(read_weights(&bytes, Path::new("golden.ctnn")).unwrap(), net);
}

#[test]
fn seeds_follow_the_documented_formula() {
    assert_eq!(variant_seed(42, 3, 7), 42_307);
    assert_eq!(variant_seed(0, 9, 29), 929);
}

// Regression pins for the synthetic data; a change here means every
// downstream artifact changes too.
#[test]
fn frame_checksums() {
    assert_eq!(
        sha256_bytes(&frame_bytes(&make_frame(3, 7).unwrap())),
        "8b2639b7a439cbdf5bf5dbd6edb3985bdd629129d6e64bd3e983642bd04551b9"
    );
    let mut all = Vec::new();
    for f in make_training_set(30, 42).unwrap() {
        all.extend(frame_bytes(&f));
    }
    assert_eq!(all.len(), 300 * 1568);
    assert_eq!(
        sha256_bytes(&all),
        "0e174129078fe08ba333c7907cee7147210e2362f20d1f58c21109062af134c8"
    );
}
