/** Minimal deterministic PNG writer: 8-bit RGB, filter 0, fixed-level
 * deflate, with figure text carried in tEXt metadata chunks. */

import { deflateSync } from "zlib";

const SIGNATURE = Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(buf: Buffer): number {
  let c = 0xffffffff;
  for (const byte of buf) c = CRC_TABLE[(c ^ byte) & 0xff] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Buffer): Buffer {
  const len = Buffer.alloc(4);
  len.writeUInt32BE(data.length);
  const body = Buffer.concat([Buffer.from(type, "ascii"), data]);
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(body));
  return Buffer.concat([len, body, crc]);
}

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly pixels: Uint8Array; // RGB
  private texts: Array<[string, string]> = [];

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
    this.pixels = new Uint8Array(width * height * 3).fill(255);
  }

  setPixel(x: number, y: number, rgb: [number, number, number]): void {
    const xi = Math.round(x);
    const yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height) return;
    const o = (yi * this.width + xi) * 3;
    this.pixels[o] = rgb[0];
    this.pixels[o + 1] = rgb[1];
    this.pixels[o + 2] = rgb[2];
  }

  fillRect(x: number, y: number, w: number, h: number, rgb: [number, number, number], alpha = 1): void {
    const x0 = Math.max(0, Math.round(x));
    const y0 = Math.max(0, Math.round(y));
    const x1 = Math.min(this.width, Math.round(x + w));
    const y1 = Math.min(this.height, Math.round(y + h));
    for (let yy = y0; yy < y1; yy++) {
      for (let xx = x0; xx < x1; xx++) {
        const o = (yy * this.width + xx) * 3;
        for (let c = 0; c < 3; c++) {
          this.pixels[o + c] = Math.round(alpha * rgb[c] + (1 - alpha) * this.pixels[o + c]);
        }
      }
    }
  }

  drawLine(x1: number, y1: number, x2: number, y2: number, rgb: [number, number, number]): void {
    // Bresenham on rounded endpoints: deterministic integer walk
    let x = Math.round(x1);
    let y = Math.round(y1);
    const xe = Math.round(x2);
    const ye = Math.round(y2);
    const dx = Math.abs(xe - x);
    const dy = -Math.abs(ye - y);
    const sx = x < xe ? 1 : -1;
    const sy = y < ye ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      this.setPixel(x, y, rgb);
      if (x === xe && y === ye) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
    }
  }

  drawCircle(cx: number, cy: number, r: number, rgb: [number, number, number]): void {
    for (let yy = Math.floor(cy - r); yy <= Math.ceil(cy + r); yy++) {
      for (let xx = Math.floor(cx - r); xx <= Math.ceil(cx + r); xx++) {
        if ((xx - cx) ** 2 + (yy - cy) ** 2 <= r * r) this.setPixel(xx, yy, rgb);
      }
    }
  }

  addText(keyword: string, value: string): void {
    this.texts.push([keyword, value]);
  }

  encode(): Buffer {
    const ihdr = Buffer.alloc(13);
    ihdr.writeUInt32BE(this.width, 0);
    ihdr.writeUInt32BE(this.height, 4);
    ihdr[8] = 8; // bit depth
    ihdr[9] = 2; // color type RGB
    const rowBytes = this.width * 3;
    const raw = Buffer.alloc((rowBytes + 1) * this.height);
    for (let y = 0; y < this.height; y++) {
      raw[y * (rowBytes + 1)] = 0; // filter none
      raw.set(this.pixels.subarray(y * rowBytes, (y + 1) * rowBytes), y * (rowBytes + 1) + 1);
    }
    const chunks = [SIGNATURE, chunk("IHDR", ihdr)];
    for (const [keyword, value] of this.texts) {
      chunks.push(
        chunk("tEXt", Buffer.concat([
          Buffer.from(keyword, "latin1"),
          Buffer.from([0]),
          Buffer.from(value, "latin1"),
        ]))
      );
    }
    chunks.push(chunk("IDAT", deflateSync(raw, { level: 9 })));
    chunks.push(chunk("IEND", Buffer.alloc(0)));
    return Buffer.concat(chunks);
  }
}

/** Parse the tEXt chunks back out (used by tests and downstream tooling). */
export function readTextChunks(png: Buffer): Map<string, string> {
  const out = new Map<string, string>();
  let offset = SIGNATURE.length;
  while (offset + 8 <= png.length) {
    const len = png.readUInt32BE(offset);
    const type = png.toString("ascii", offset + 4, offset + 8);
    if (type === "tEXt") {
      const data = png.subarray(offset + 8, offset + 8 + len);
      const sep = data.indexOf(0);
      out.set(data.toString("latin1", 0, sep), data.toString("latin1", sep + 1));
    }
    offset += 12 + len;
  }
  return out;
}

export function hexColor(color: string): [number, number, number] {
  const m = /^#([0-9a-f]{6})$/i.exec(color);
  if (!m) throw new Error(`not a hex color: ${color}`);
  const v = parseInt(m[1], 16);
  return [(v >> 16) & 0xff, (v >> 8) & 0xff, v & 0xff];
}
