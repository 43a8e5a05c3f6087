//! Contact sheets: one row per class, one column per sample, each row topped
//! by a caption strip with the class id.

use rayon::prelude::*;

use crate::dataset::{class_spec, render_image, DatasetConfig, DatasetError};
use crate::raster::Canvas;

pub const CAPTION_HEIGHT: u32 = 14;
const GLYPH_SCALE: i64 = 2;

/// 3×5 glyphs, one row per byte, bit 2 is the left column.
fn glyph(c: char) -> [u8; 5] {
    match c {
        '0' => [0b111, 0b101, 0b101, 0b101, 0b111],
        '1' => [0b010, 0b110, 0b010, 0b010, 0b111],
        '2' => [0b111, 0b001, 0b111, 0b100, 0b111],
        '3' => [0b111, 0b001, 0b111, 0b001, 0b111],
        '4' => [0b101, 0b101, 0b111, 0b001, 0b001],
        '5' => [0b111, 0b100, 0b111, 0b001, 0b111],
        '6' => [0b111, 0b100, 0b111, 0b101, 0b111],
        '7' => [0b111, 0b001, 0b010, 0b010, 0b010],
        '8' => [0b111, 0b101, 0b111, 0b101, 0b111],
        '9' => [0b111, 0b101, 0b111, 0b001, 0b111],
        'A' => [0b010, 0b101, 0b111, 0b101, 0b101],
        'C' => [0b111, 0b100, 0b100, 0b100, 0b111],
        'L' => [0b100, 0b100, 0b100, 0b100, 0b111],
        'S' => [0b111, 0b100, 0b111, 0b001, 0b111],
        _ => [0; 5],
    }
}

/// Burns `text` into the canvas with its top-left corner at `(x, y)`.
pub fn draw_text(canvas: &mut Canvas, text: &str, x: i64, y: i64, value: u8) {
    for (n, c) in text.chars().enumerate() {
        let ox = x + n as i64 * 4 * GLYPH_SCALE;
        for (row, bits) in glyph(c).iter().enumerate() {
            for col in 0..3 {
                if bits & (0b100 >> col) != 0 {
                    for sy in 0..GLYPH_SCALE {
                        for sx in 0..GLYPH_SCALE {
                            canvas.put(ox + col * GLYPH_SCALE + sx, y + row as i64 * GLYPH_SCALE + sy, value);
                        }
                    }
                }
            }
        }
    }
}

pub fn caption(class_id: u64) -> String {
    format!("CLASS {class_id}")
}

pub fn preview(config: &DatasetConfig, class_ids: &[u64], samples_per_class: u32) -> Result<Canvas, DatasetError> {
    config.validate()?;
    if class_ids.is_empty() || samples_per_class == 0 {
        return Err(DatasetError::Config(
            "preview needs at least one class and one sample".into(),
        ));
    }
    let samples = u64::from(samples_per_class);
    for &c in class_ids {
        if c >= config.classes || samples > config.instances {
            return Err(DatasetError::OutOfBounds {
                class_id: c,
                instance_id: samples - 1,
                classes: config.classes,
                instances: config.instances,
            });
        }
    }
    let (w, h) = (config.width, config.height);
    let cells: Vec<(usize, u64, Canvas)> = class_ids
        .par_iter()
        .enumerate()
        .map(|(row, &c)| {
            let spec = class_spec(config, c)?;
            (0..samples)
                .map(|i| Ok((row, i, render_image(config, &spec, i)?)))
                .collect::<Result<Vec<_>, DatasetError>>()
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();

    let row_height = i64::from(h + CAPTION_HEIGHT);
    let mut sheet = Canvas::new(w * samples_per_class, (h + CAPTION_HEIGHT) * class_ids.len() as u32);
    for (row, &c) in class_ids.iter().enumerate() {
        draw_text(&mut sheet, &caption(c), 2, row as i64 * row_height + 2, 255);
    }
    for (row, i, cell) in &cells {
        sheet.blit(
            cell,
            *i as i64 * i64::from(w),
            *row as i64 * row_height + i64::from(CAPTION_HEIGHT),
        );
    }
    Ok(sheet)
}
