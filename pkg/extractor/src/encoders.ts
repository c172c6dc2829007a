/**
 * Pluggable sentence encoders. The hashing encoder is fully local and
 * deterministic: character trigrams are feature-hashed into a fixed-width
 * signed vector and L2-normalized. It satisfies the embedding format
 * contract without model weights, which keeps extraction runnable offline;
 * a transformers-based multilingual encoder can be selected when its
 * package and weights are available.
 */

export interface SentenceEncoder {
  readonly name: string;
  readonly dim: number;
  /** Maximum characters considered when encoding one text. */
  readonly maxChars: number;
  encode(texts: string[]): Promise<Float32Array[]>;
}

const FNV_OFFSET = 0x811c9dc5;
const FNV_PRIME = 0x01000193;

function fnv1a(text: string): number {
  let hash = FNV_OFFSET;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, FNV_PRIME) >>> 0;
  }
  return hash >>> 0;
}

export class HashingEncoder implements SentenceEncoder {
  readonly name: string;
  readonly dim: number;
  readonly maxChars = 8192;

  constructor(dim = 128) {
    if (dim < 2) throw new Error(`hash encoder dim must be >= 2, got ${dim}`);
    this.dim = dim;
    this.name = `hash:${dim}`;
  }

  private encodeOne(text: string): Float32Array {
    const vec = new Float32Array(this.dim);
    const normalized = ` ${text.trim().toLowerCase().slice(0, this.maxChars)} `;
    for (let i = 0; i + 3 <= normalized.length; i++) {
      const hash = fnv1a(normalized.slice(i, i + 3));
      const bucket = hash % this.dim;
      const sign = (hash >>> 17) & 1 ? 1 : -1;
      vec[bucket] += sign;
    }
    let norm = 0;
    for (const v of vec) norm += v * v;
    norm = Math.sqrt(norm);
    if (norm > 0) {
      for (let i = 0; i < vec.length; i++) vec[i] = Math.fround(vec[i] / norm);
    }
    return vec;
  }

  async encode(texts: string[]): Promise<Float32Array[]> {
    return texts.map((t) => this.encodeOne(t));
  }
}

/** Adapter for @xenova/transformers feature extraction pipelines. */
export class TransformersEncoder implements SentenceEncoder {
  readonly name: string;
  readonly maxChars = 4096;
  dim = 0;
  private readonly model: string;
  private pipe: ((texts: string[], opts: object) => Promise<{ tolist(): number[][] }>) | null = null;

  constructor(model: string) {
    this.model = model;
    this.name = `xenova:${model}`;
  }

  private async init(): Promise<void> {
    if (this.pipe) return;
    let pipeline;
    try {
      ({ pipeline } = await import('@xenova/transformers'));
    } catch (err) {
      throw new Error(
        `encoder load failure: @xenova/transformers is not installed (${(err as Error).message})`
      );
    }
    try {
      this.pipe = await pipeline('feature-extraction', this.model);
    } catch (err) {
      throw new Error(
        `encoder load failure: cannot load model ${this.model} (${(err as Error).message})`
      );
    }
  }

  async encode(texts: string[]): Promise<Float32Array[]> {
    await this.init();
    const output = await this.pipe!(texts, { pooling: 'mean', normalize: true });
    const vectors = output.tolist().map((row) => Float32Array.from(row));
    if (vectors.length > 0) this.dim = vectors[0].length;
    return vectors;
  }
}

/** Parse an encoder spec: "hash", "hash:<dim>", or "xenova:<model id>". */
export function makeEncoder(spec: string): SentenceEncoder {
  if (spec === 'hash') return new HashingEncoder();
  if (spec.startsWith('hash:')) {
    const dim = Number(spec.slice('hash:'.length));
    if (!Number.isInteger(dim)) {
      throw new Error(`bad hash encoder dim in ${JSON.stringify(spec)}`);
    }
    return new HashingEncoder(dim);
  }
  if (spec.startsWith('xenova:')) {
    return new TransformersEncoder(spec.slice('xenova:'.length));
  }
  throw new Error(`unknown encoder ${JSON.stringify(spec)} (expected hash[:dim] or xenova:<model>)`);
}
