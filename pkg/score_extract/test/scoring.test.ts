import { describe, expect, it } from 'vitest';
import { llmClassScores, tabpfnScores, PromptTooLongError, CausalScoringHandle } from '../src/scoring.js';
import { StubCausalHandle, StubTabpfnHandle } from '../src/handles.js';
import { EncodedDataset } from '../src/schema.js';

describe('llmClassScores', () => {
  it('is a pure function of the text: identical labels score identically', async () => {
    const handle = new StubCausalHandle();
    const scores = await llmClassScores('some prompt', ['yes', 'no', 'yes'], handle);
    expect(scores[0]).toBe(scores[2]);
    expect(scores[0]).not.toBe(scores[1]);
  });

  it('negates the mean cross-entropy', async () => {
    const constant: CausalScoringHandle = {
      id: 'const',
      contextChars: 0,
      meanCrossEntropy: async () => 2.5,
    };
    const scores = await llmClassScores('p', ['a'], constant);
    expect(scores).toEqual([-2.5]);
  });

  it('mean reduction makes the score independent of token repetition when the per-token loss is constant', async () => {
    // per-token loss depends only on the token text, so "hot" and "hot hot"
    // average to the same value
    const perToken: CausalScoringHandle = {
      id: 'per-token',
      contextChars: 0,
      meanCrossEntropy: async (_p, continuation) => {
        const tokens = continuation.trim().split(/\s+/);
        const losses = tokens.map((t) => t.length * 0.5);
        return losses.reduce((a, b) => a + b, 0) / losses.length;
      },
    };
    const [single, doubled] = await llmClassScores('p', ['hot', 'hot hot'], perToken);
    expect(doubled).toBe(single);
  });

  it('rejects prompts exceeding the context window, naming no row itself', async () => {
    const handle = new StubCausalHandle(10);
    await expect(llmClassScores('a very long prompt', ['x'], handle)).rejects.toThrow(
      PromptTooLongError,
    );
  });
});

function dataset(n: number, k = 2, features = 3): EncodedDataset {
  const featuresM: number[][] = [];
  const labels: number[] = [];
  for (let i = 0; i < n; i++) {
    featuresM.push(Array.from({ length: features }, (_, d) => ((i * 31 + d * 7) % 17) / 4));
    labels.push(i % k);
  }
  return {
    features: featuresM,
    labels,
    rowIds: Array.from({ length: n }, (_, i) => i),
    schema: {
      columns: Array.from({ length: features }, (_, d) => ({
        name: `f${d}`,
        kind: 'numeric' as const,
      })),
      target: 'y',
      classLabels: Array.from({ length: k }, (_, c) => `c${c}`),
    },
  };
}

function splitOf(train: number[], val: number[], test: number[]) {
  return { train, val, test };
}

describe('tabpfnScores', () => {
  it('does not subsample small training splits', async () => {
    const ds = dataset(200);
    const split = splitOf(
      Array.from({ length: 50 }, (_, i) => i),
      [50, 51],
      [60, 61, 62],
    );
    const result = await tabpfnScores(ds, split, new StubTabpfnHandle());
    expect(result.contextRowIds).toHaveLength(50);
    expect(result.contextRowIds).toEqual(split.train);
  });

  it('subsamples exactly the context budget when the train split is larger', async () => {
    const n = 15628 + 200;
    const ds = dataset(n);
    const train = Array.from({ length: 15628 }, (_, i) => i);
    const split = splitOf(train, [15700], [15800]);
    const result = await tabpfnScores(ds, split, new StubTabpfnHandle(), 5);
    expect(result.contextRowIds).toHaveLength(1000);
    const asSet = new Set(result.contextRowIds);
    expect(asSet.size).toBe(1000);
    for (const rid of result.contextRowIds) expect(rid).toBeLessThan(15628);
    // deterministic in the subsample seed
    const again = await tabpfnScores(ds, split, new StubTabpfnHandle(), 5);
    expect(again.contextRowIds).toEqual(result.contextRowIds);
  });

  it('emits one score row per train+val+test row', async () => {
    const ds = dataset(100);
    const split = splitOf([0, 1, 2, 3], [10, 11], [20, 21, 22]);
    const result = await tabpfnScores(ds, split, new StubTabpfnHandle());
    expect(result.rowIds).toHaveLength(4 + 2 + 3);
    expect(result.scores).toHaveLength(9);
    expect(result.scores[0]).toHaveLength(2);
  });

  it('rejects class counts beyond the model limit', async () => {
    const ds = dataset(40, 2);
    const split = splitOf([0, 1], [2], [3]);
    const handle = new StubTabpfnHandle({ maxClasses: 1 });
    await expect(tabpfnScores(ds, split, handle)).rejects.toThrow(/classes exceed/);
  });

  it('rejects feature counts beyond the model limit', async () => {
    const ds = dataset(40, 2, 7);
    const split = splitOf([0, 1], [2], [3]);
    const handle = new StubTabpfnHandle({ maxFeatures: 5 });
    await expect(tabpfnScores(ds, split, handle)).rejects.toThrow(/features exceed/);
  });
});
