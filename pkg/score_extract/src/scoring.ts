/** Class scoring: the negative mean-reduced cross-entropy of each class label
 * appended to the prompt (causal LMs score only the continuation tokens), and
 * raw TabPFN outputs with the 1000-row in-context limit. */

import { EncodedDataset } from './schema.js';
import { Rng } from './rng.js';

export class PromptTooLongError extends Error {}

export interface CausalScoringHandle {
  readonly id: string;
  /** Crude overflow guard in characters; 0 disables the check. */
  readonly contextChars: number;
  /** Mean cross-entropy per token of `continuation` given `prompt`. */
  meanCrossEntropy(prompt: string, continuation: string): Promise<number>;
}

/** One raw score per class label: negated mean-reduced cross-entropy, so that
 * higher means more likely. Mean reduction keeps multi-word labels comparable. */
export async function llmClassScores(
  prompt: string,
  classLabels: string[],
  handle: CausalScoringHandle,
): Promise<number[]> {
  if (classLabels.length === 0) throw new Error('no class labels to score');
  const scores: number[] = [];
  for (const label of classLabels) {
    const continuation = ' ' + label;
    if (handle.contextChars > 0 && prompt.length + continuation.length > handle.contextChars) {
      throw new PromptTooLongError(
        `prompt of ${prompt.length} chars exceeds the model's window (${handle.contextChars})`,
      );
    }
    scores.push(-(await handle.meanCrossEntropy(prompt, continuation)));
  }
  return scores;
}

export interface TabpfnLimits {
  maxClasses: number;
  maxFeatures: number;
  /** In-context training-row budget (1000 for TabPFN). */
  maxContextRows: number;
}

export interface TabpfnHandle {
  readonly id: string;
  readonly limits: TabpfnLimits;
  /** Raw (pre-normalization) per-class scores for the query rows. */
  rawScores(trainX: number[][], trainY: number[], queryX: number[][]): Promise<number[][]>;
}

export interface SplitRows {
  train: number[];
  val: number[];
  test: number[];
}

export interface TabpfnResult {
  rowIds: number[];
  scores: number[][];
  /** Row ids that conditioned the model (after any subsampling). */
  contextRowIds: number[];
}

/** Score every train/val/test row. When the training split exceeds the model's
 * in-context budget, a seeded uniform subsample of exactly that many rows
 * conditions the model; scores are still emitted for all rows. */
export async function tabpfnScores(
  dataset: EncodedDataset,
  split: SplitRows,
  handle: TabpfnHandle,
  subsampleSeed = 0,
): Promise<TabpfnResult> {
  const k = dataset.schema.classLabels.length;
  if (k > handle.limits.maxClasses) {
    throw new Error(`${k} classes exceed the model limit of ${handle.limits.maxClasses}`);
  }
  if (dataset.schema.columns.length > handle.limits.maxFeatures) {
    throw new Error(
      `${dataset.schema.columns.length} features exceed the model limit of ${handle.limits.maxFeatures}`,
    );
  }
  const pos = new Map(dataset.rowIds.map((r, i) => [r, i]));
  const lookup = (ids: number[]) =>
    ids.map((r) => {
      const i = pos.get(r);
      if (i === undefined) throw new Error(`row id ${r} not present in dataset`);
      return i;
    });

  let context = [...split.train];
  if (context.length > handle.limits.maxContextRows) {
    const rng = new Rng(subsampleSeed);
    const picked = rng.sampleIndices(context.length, handle.limits.maxContextRows);
    context = picked.map((i) => context[i]);
  }
  const ctxIdx = lookup(context);
  const trainX = ctxIdx.map((i) => dataset.features[i]);
  const trainY = ctxIdx.map((i) => dataset.labels[i]);

  const rowIds = [...split.train, ...split.val, ...split.test];
  const queryIdx = lookup(rowIds);
  const queryX = queryIdx.map((i) => dataset.features[i]);

  const scores = await handle.rawScores(trainX, trainY, queryX);
  if (scores.length !== rowIds.length) {
    throw new Error(`model returned ${scores.length} rows for ${rowIds.length} queries`);
  }
  for (const row of scores) {
    if (row.length !== k) throw new Error(`model returned ${row.length} scores for ${k} classes`);
  }
  return { rowIds, scores, contextRowIds: context };
}
