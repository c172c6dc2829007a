// Optional encoder backend; only needed at runtime when selected.
declare module '@xenova/transformers' {
  export function pipeline(task: string, model?: string): Promise<any>;
}
