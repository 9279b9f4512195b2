//! Reading and writing gray images in PGM format (ASCII and binary).

use shapespace::{read_pnm, write_pnm, Image};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let img = Image::from_fn(8, 4, |x, y| (x * 30 + y * 5) as u8)?;

    let ascii = write_pnm(&img, true);
    println!("{}", String::from_utf8_lossy(&ascii));

    let binary = write_pnm(&img, false);
    assert_eq!(read_pnm(&binary)?, img);
    assert_eq!(read_pnm(&ascii)?, img);

    // 4-bit images are rescaled to the 8-bit range on read
    let low = read_pnm(b"P2\n3 1\n15\n0 7 15\n")?;
    println!("maxval 15 samples read as {:?}", low.values());

    match read_pnm(b"P2 2 2 255 0 1 2") {
        Err(e) => println!("truncated file: {e}"),
        Ok(_) => unreachable!(),
    }

    let path = std::env::temp_dir().join("shapespace_ramp.pgm");
    std::fs::write(&path, binary)?;
    println!("wrote {}", path.display());
    Ok(())
}
