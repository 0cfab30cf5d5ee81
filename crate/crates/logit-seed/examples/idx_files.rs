//! Round-trip the big-endian IDX image/label format used by the MNIST
//! distribution: write a tiny synthetic set, read it back, and show the
//! error reporting for a truncated file.

use logit_seed::data::{
    read_idx_images, read_idx_labels, write_idx_images, write_idx_labels, IdxImages, IdxLabels,
};

fn main() -> logit_seed::Result<()> {
    let dir = std::env::temp_dir().join("logit-seed-idx-demo");
    std::fs::create_dir_all(&dir)?;
    let image_path = dir.join("digits-images-idx3-ubyte");
    let label_path = dir.join("digits-labels-idx1-ubyte");

    // Three 4x4 "digits": a gradient, a border, and a checkerboard.
    let mut pixels = Vec::with_capacity(3 * 16);
    pixels.extend((0..16).map(|i| (i * 17) as u8));
    pixels.extend((0..16).map(|i| if i / 4 == 0 || i / 4 == 3 || i % 4 == 0 || i % 4 == 3 { 255 } else { 0 }));
    pixels.extend((0..16).map(|i| if (i / 4 + i % 4) % 2 == 0 { 255 } else { 0 }));
    let images = IdxImages {
        count: 3,
        rows: 4,
        cols: 4,
        pixels,
    };
    let labels = IdxLabels {
        labels: vec![7, 0, 8],
    };
    write_idx_images(&image_path, &images)?;
    write_idx_labels(&label_path, &labels)?;

    let images_back = read_idx_images(&image_path)?;
    let labels_back = read_idx_labels(&label_path)?;
    println!(
        "wrote and re-read {} images of {}x{} ({} bytes each file body)",
        images_back.count,
        images_back.rows,
        images_back.cols,
        images_back.pixels.len()
    );
    println!("labels: {:?}", labels_back.labels);
    assert_eq!(images_back, images);
    assert_eq!(labels_back, labels);
    for (i, &label) in labels_back.labels.iter().enumerate() {
        println!("image {i} (label {label}):");
        for r in 0..4 {
            let row: String = (0..4)
                .map(|c| match images_back.pixels[16 * i + 4 * r + c] {
                    0 => "  ",
                    1..=127 => "..",
                    _ => "##",
                })
                .collect();
            println!("  {row}");
        }
    }

    // Corrupt the header and show the typed error.
    let mut bytes = std::fs::read(&image_path)?;
    bytes.truncate(10);
    let broken = dir.join("truncated-images-idx3-ubyte");
    std::fs::write(&broken, bytes)?;
    match read_idx_images(&broken) {
        Err(e) => println!("\ntruncated file rejected: {e}"),
        Ok(_) => println!("\nunexpectedly parsed a truncated file"),
    }
    Ok(())
}
