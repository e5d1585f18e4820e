#!/usr/bin/env python3
"""Regenerates src/verm/render/font_data.inc from Pillow's built-in bitmap font.

Each glyph is a 6x11 cell; one byte per row, bit 5 is the leftmost pixel.
"""
import sys
from PIL import Image, ImageDraw, ImageFont

W, H = 6, 11


def main(out_path):
    font = ImageFont.load_default_imagefont()
    lines = ["// Generated by tools/gen_font.py. Do not edit.",
             f"// {W}x{H} cells, printable ASCII 32..126, one byte per row (MSB-first in 6 bits).",
             ""]
    for code in range(32, 127):
        im = Image.new("L", (W, H), 0)
        ImageDraw.Draw(im).text((0, 0), chr(code), font=font, fill=255)
        rows = []
        for y in range(H):
            bits = 0
            for x in range(W):
                if im.getpixel((x, y)) > 127:
                    bits |= 1 << (W - 1 - x)
            rows.append(f"0x{bits:02x}")
        shown = chr(code) if chr(code) not in "\\'" else "\\" + chr(code)
        lines.append("{" + ", ".join(rows) + "},  // '" + shown + "'")
    with open(out_path, "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/verm/render/font_data.inc")
