/**
 * XEMB binary embedding matrix format: magic "XEMB", then three u32
 * little-endian values (version=1, rows, dim), then rows*dim float32
 * little-endian, row-major. Bit-exact round trips.
 */

export const XEMB_MAGIC = 'XEMB';
export const XEMB_VERSION = 1;
const HEADER_BYTES = 16;

export function encodeXemb(rows: Float32Array[], dim: number): Buffer {
  for (const row of rows) {
    if (row.length !== dim) {
      throw new Error(`embedding row has ${row.length} components, expected ${dim}`);
    }
  }
  const buf = Buffer.alloc(HEADER_BYTES + rows.length * dim * 4);
  buf.write(XEMB_MAGIC, 0, 'ascii');
  buf.writeUInt32LE(XEMB_VERSION, 4);
  buf.writeUInt32LE(rows.length, 8);
  buf.writeUInt32LE(dim, 12);
  let offset = HEADER_BYTES;
  for (const row of rows) {
    for (const value of row) {
      buf.writeFloatLE(value, offset);
      offset += 4;
    }
  }
  return buf;
}

export interface XembMatrix {
  rows: number;
  dim: number;
  data: Float32Array[];
}

export function decodeXemb(buf: Buffer): XembMatrix {
  if (buf.length < HEADER_BYTES || buf.toString('ascii', 0, 4) !== XEMB_MAGIC) {
    throw new Error('not an XEMB embedding file');
  }
  const version = buf.readUInt32LE(4);
  if (version !== XEMB_VERSION) {
    throw new Error(`unsupported XEMB version ${version}`);
  }
  const rows = buf.readUInt32LE(8);
  const dim = buf.readUInt32LE(12);
  if (buf.length !== HEADER_BYTES + rows * dim * 4) {
    throw new Error(`expected ${rows * dim * 4} payload bytes, got ${buf.length - HEADER_BYTES}`);
  }
  const data: Float32Array[] = [];
  let offset = HEADER_BYTES;
  for (let r = 0; r < rows; r++) {
    const row = new Float32Array(dim);
    for (let c = 0; c < dim; c++) {
      row[c] = buf.readFloatLE(offset);
      offset += 4;
    }
    data.push(row);
  }
  return { rows, dim, data };
}
