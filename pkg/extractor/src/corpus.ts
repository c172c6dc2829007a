/** JSON Lines corpus records, one document per line. */

export type Role = 'source' | 'target';

export interface SentenceRecord {
  text: string;
  tokens: number;
  emb_row: number;
}

export interface DocumentRecord {
  doc_id: string;
  domain_id: string;
  lang: string;
  role: Role;
  sentences: SentenceRecord[];
  doc_emb_row?: number;
}

export function tokenCount(text: string): number {
  const trimmed = text.trim();
  return trimmed === '' ? 0 : trimmed.split(/\s+/).length;
}

export function corpusToJsonLines(docs: DocumentRecord[]): string {
  return docs.map((d) => JSON.stringify(d) + '\n').join('');
}
