/**
 * Extraction pipeline: read one text file per document (one sentence per
 * line), encode every sentence plus a document-level vector, and write the
 * XEMB embedding matrix and JSON Lines corpus.
 *
 * Input files are named  <domain>__<role>__<lang>__<docid>.txt  with role
 * "source" or "target". Sentence rows keep file order and are never
 * truncated; only the document-level text is capped at the encoder's
 * context before encoding.
 */

import * as fs from 'fs';
import * as path from 'path';

import { DocumentRecord, Role, SentenceRecord, corpusToJsonLines, tokenCount } from './corpus';
import { SentenceEncoder } from './encoders';
import { encodeXemb } from './xemb';

export interface ExtractionManifest {
  inputDir: string;
  encoder: SentenceEncoder;
  batchSize: number;
  outCorpus: string;
  outEmbeddings: string;
  rejectsPath?: string;
}

export interface ExtractionResult {
  documents: number;
  rows: number;
  rejected: string[];
}

interface ParsedName {
  domainId: string;
  role: Role;
  lang: string;
  docId: string;
}

export function parseDocFileName(fileName: string): ParsedName {
  const stem = fileName.replace(/\.txt$/, '');
  const parts = stem.split('__');
  if (parts.length !== 4 || fileName === stem) {
    throw new Error(
      `bad document file name ${JSON.stringify(fileName)} ` +
      '(expected <domain>__<role>__<lang>__<docid>.txt)'
    );
  }
  const [domainId, role, lang, docId] = parts;
  if (role !== 'source' && role !== 'target') {
    throw new Error(`bad role ${JSON.stringify(role)} in ${JSON.stringify(fileName)}`);
  }
  return { domainId, role, lang, docId };
}

async function encodeBatched(
  encoder: SentenceEncoder, texts: string[], batchSize: number
): Promise<Float32Array[]> {
  const out: Float32Array[] = [];
  for (let i = 0; i < texts.length; i += batchSize) {
    out.push(...await encoder.encode(texts.slice(i, i + batchSize)));
  }
  return out;
}

export async function extract(manifest: ExtractionManifest): Promise<ExtractionResult> {
  const { inputDir, encoder, batchSize, outCorpus, outEmbeddings } = manifest;
  if (batchSize < 1) throw new Error('batch size must be >= 1');
  const fileNames = fs.readdirSync(inputDir).filter((f) => f.endsWith('.txt')).sort();

  const docs: DocumentRecord[] = [];
  const rows: Float32Array[] = [];
  const rejected: string[] = [];
  let dim: number | null = null;

  for (const fileName of fileNames) {
    const meta = parseDocFileName(fileName);
    const raw = fs.readFileSync(path.join(inputDir, fileName), 'utf-8');
    const sentences = raw.split('\n').map((line) => line.trim()).filter((line) => line !== '');
    if (sentences.length === 0) {
      process.stderr.write(`warning: skipping empty document ${fileName}\n`);
      rejected.push(fileName);
      continue;
    }

    const docText = sentences.join(' ').slice(0, encoder.maxChars);
    const vectors = await encodeBatched(encoder, [...sentences, docText], batchSize);
    if (dim === null) dim = vectors[0].length;

    const sentenceRecords: SentenceRecord[] = sentences.map((text, i) => ({
      text,
      tokens: tokenCount(text),
      emb_row: rows.length + i,
    }));
    const docEmbRow = rows.length + sentences.length;
    rows.push(...vectors);

    docs.push({
      doc_id: meta.docId,
      domain_id: meta.domainId,
      lang: meta.lang,
      role: meta.role,
      sentences: sentenceRecords,
      doc_emb_row: docEmbRow,
    });
  }

  if (docs.length === 0) {
    process.stderr.write(`warning: no documents extracted from ${inputDir}\n`);
  }
  fs.writeFileSync(outEmbeddings, encodeXemb(rows, dim ?? encoder.dim));
  fs.writeFileSync(outCorpus, corpusToJsonLines(docs));
  const rejectsPath = manifest.rejectsPath ?? `${outCorpus}.rejects`;
  if (rejected.length > 0) {
    fs.writeFileSync(rejectsPath, rejected.map((f) => f + '\n').join(''));
  }
  return { documents: docs.length, rows: rows.length, rejected };
}
