#!/usr/bin/env python3
"""Builds the 512x512 grayscale test set and a sample Bayer mosaic.

Sources are the photographic sample images bundled with scikit-image and
scikit-learn (scenes, portraits, objects and two textures; no microscopy,
astronomy or medical images, and none that would need more than 1.5x
upsampling). Each is converted to 8-bit gray, resized so its short side is
512 px and center-cropped to 512x512.
"""
import argparse
import os

import numpy as np
import skimage
import sklearn
from PIL import Image

STANDARD = [
    ("camera", "skimage", "camera.png"),
    ("astronaut", "skimage", "astronaut.png"),
    ("motorcycle", "skimage", "motorcycle_left.png"),
    ("coffee", "skimage", "coffee.png"),
    ("rocket", "skimage", "rocket.jpg"),
    ("china", "sklearn", "china.jpg"),
    ("flower", "sklearn", "flower.jpg"),
    ("brick", "skimage", "brick.png"),
    ("gravel", "skimage", "gravel.png"),
    ("grass", "skimage", "grass.png"),
]

SIDE = 512


def square(im):
    w, h = im.size
    scale = SIDE / min(w, h)
    if scale != 1.0:
        im = im.resize((round(w * scale), round(h * scale)), Image.LANCZOS)
    w, h = im.size
    left, top = (w - SIDE) // 2, (h - SIDE) // 2
    return im.crop((left, top, left + SIDE, top + SIDE))


def write_pgm16(path, arr):
    h, w = arr.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n65535\n".encode())
        f.write(arr.astype(">u2").tobytes())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    args = ap.parse_args()
    sources = {
        "skimage": os.path.join(os.path.dirname(skimage.__file__), "data"),
        "sklearn": os.path.join(os.path.dirname(sklearn.__file__), "datasets", "images"),
    }
    src = sources["skimage"]
    std_dir = os.path.join(args.out, "standard")
    raw_dir = os.path.join(args.out, "raw")
    os.makedirs(std_dir, exist_ok=True)
    os.makedirs(raw_dir, exist_ok=True)

    for old in os.listdir(std_dir):
        if old.endswith(".pgm"):
            os.remove(os.path.join(std_dir, old))
    for idx, (name, package, fname) in enumerate(STANDARD):
        im = square(Image.open(os.path.join(sources[package], fname)).convert("L"))
        im.save(os.path.join(std_dir, f"{idx:02d}_{name}.pgm"))

    # GRGB mosaic: even columns green, odd columns red on even rows and blue
    # on odd rows. Linear 16-bit values with mild sensor-like noise.
    rgb = np.asarray(
        Image.open(os.path.join(src, "astronaut.png")).convert("RGB").resize((256, 256), Image.LANCZOS),
        dtype=np.float64,
    ) / 255.0
    rng = np.random.default_rng(7)
    h, w, _ = rgb.shape
    mosaic = np.empty((h, w))
    mosaic[:, 0::2] = rgb[:, 0::2, 1]
    mosaic[0::2, 1::2] = rgb[0::2, 1::2, 0]
    mosaic[1::2, 1::2] = rgb[1::2, 1::2, 2]
    mosaic = mosaic * 0.8 + 0.05 + rng.normal(0.0, 0.01, mosaic.shape)
    mosaic = np.clip(np.round(mosaic * 65535), 0, 65535)
    write_pgm16(os.path.join(raw_dir, "astronaut_grgb.pgm"), mosaic)
    with open(os.path.join(raw_dir, "astronaut_grgb.pgm.bayer"), "w") as f:
        f.write("pattern=grgb\n")


if __name__ == "__main__":
    main()
