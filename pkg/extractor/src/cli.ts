#!/usr/bin/env node
/**
 * CLI wrapper: xemb-extract --input-dir DIR --out-corpus F --out-emb F
 *              [--encoder hash[:dim]|xenova:<model>] [--batch-size N]
 *              [--rejects F]
 */

import { makeEncoder } from './encoders';
import { extract } from './extract';

interface CliArgs {
  inputDir: string;
  encoder: string;
  outCorpus: string;
  outEmb: string;
  batchSize: number;
  rejects?: string;
}

function parseArgs(argv: string[]): CliArgs {
  const values = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!flag.startsWith('--') || value === undefined) {
      throw new Error(`bad argument ${JSON.stringify(flag)}`);
    }
    values.set(flag, value);
  }
  const required = (flag: string): string => {
    const v = values.get(flag);
    if (v === undefined) throw new Error(`missing required flag ${flag}`);
    return v;
  };
  const batchSize = Number(values.get('--batch-size') ?? '32');
  if (!Number.isInteger(batchSize) || batchSize < 1) {
    throw new Error('--batch-size must be a positive integer');
  }
  return {
    inputDir: required('--input-dir'),
    encoder: values.get('--encoder') ?? 'hash',
    outCorpus: required('--out-corpus'),
    outEmb: required('--out-emb'),
    batchSize,
    rejects: values.get('--rejects'),
  };
}

async function main(): Promise<number> {
  let args: CliArgs;
  try {
    args = parseArgs(process.argv.slice(2));
  } catch (err) {
    process.stderr.write(`xemb-extract: ${(err as Error).message}\n`);
    return 1;
  }
  try {
    const result = await extract({
      inputDir: args.inputDir,
      encoder: makeEncoder(args.encoder),
      batchSize: args.batchSize,
      outCorpus: args.outCorpus,
      outEmbeddings: args.outEmb,
      rejectsPath: args.rejects,
    });
    process.stderr.write(
      `extracted ${result.documents} documents, ${result.rows} embedding rows` +
      (result.rejected.length > 0 ? `, ${result.rejected.length} rejected` : '') + '\n'
    );
    return 0;
  } catch (err) {
    process.stderr.write(`xemb-extract: ${(err as Error).message}\n`);
    return 1;
  }
}

main().then((code) => {
  process.exitCode = code;
});
