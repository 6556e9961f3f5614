/**
 * Typed client for the canonhand toolkit.
 *
 * Pure pass-through: every operation either spawns the CLI or reads one of
 * its documented file formats (parameter/annotation JSON, f32 dataset plus
 * JSON sidecar). No numeric logic is reimplemented on this side.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export const VECTOR_DIM = 66;

export interface CanonicalParams {
  palm_radius: number;
  finger_radius: number;
  finger_lengths: number[];       // 6
  finger_xyz: number[];           // 15
  little_extra_origin: number[];  // 6
  thumb_rpy: number[];            // 3
  thumb_axes: number[];           // 6
  joint_lowers: number[];         // 22
  joint_uppers: number[];         // 22
  handedness: "left" | "right";
}

export interface ExtendedParams {
  palm_radius: number;
  finger_radii: number[];         // 5
  finger_lengths: number[];       // 15
  joint_origins: number[];        // 72
  joint_axes: number[];           // 36
  joint_lowers: number[];         // 22
  joint_uppers: number[];         // 22
  handedness: "left" | "right";
}

export interface InspectInfo {
  name: string;
  root: string;
  links: number;
  joints: number;
  dof: number;
  aabbs: Record<string, { min: number[]; max: number[] }>;
}

export interface FidelityReport {
  fingers: string[];
  n_configs: number;
  mean_distance: number;
  max_distance: number;
  per_config: Record<string, number>[];
}

export interface DatasetManifest {
  rows: number;
  dim: number;
  seed: number;
  ranges_sha256: string;
  dtype: string;
  rng: string;
  layout: Record<string, [number, number]>;
}

export interface VariantManifest {
  min_total: number;
  count: number;
  variants: { name: string; dof: number }[];
}

export interface RoundtripReport {
  ok: boolean;
  max_continuous: number;
  max_rotation_frobenius: number;
  limits_exact: boolean;
  axes_exact: boolean;
}

export interface Fingertips {
  fingertips: Record<string, number[]>;
  present: Record<string, boolean>;
}

export interface ClientOptions {
  /** Command vector for the CLI; default ["canonhand"] or $CANONHAND_CLI. */
  command?: string[];
}

export class CliError extends Error {
  constructor(
    message: string,
    public readonly exitCode: number,
    public readonly stderr: string,
  ) {
    super(message);
    this.name = "CliError";
  }
}

function cliCommand(opts?: ClientOptions): string[] {
  if (opts?.command) return opts.command;
  const env = process.env.CANONHAND_CLI;
  if (env) return env.split(" ");
  return ["canonhand"];
}

export function runCli(args: string[], opts?: ClientOptions): string {
  const [cmd, ...pre] = cliCommand(opts);
  const res = spawnSync(cmd, [...pre, ...args], {
    encoding: "utf-8",
    maxBuffer: 256 * 1024 * 1024,
  });
  if (res.error) throw res.error;
  if (res.status !== 0) {
    throw new CliError(
      `canonhand ${args[0]} exited with ${res.status}: ${res.stderr.trim()}`,
      res.status ?? -1,
      res.stderr,
    );
  }
  return res.stdout;
}

function runJson<T>(args: string[], opts?: ClientOptions): T {
  return JSON.parse(runCli([...args, "--json"], opts)) as T;
}

export function inspect(urdfPath: string, opts?: ClientOptions): InspectInfo {
  return runJson<InspectInfo>(["inspect", urdfPath], opts);
}

export function extract(
  urdfPath: string,
  annotationPath: string,
  outPath: string,
  opts?: ClientOptions,
): CanonicalParams {
  runCli(["extract", urdfPath, "--annotation", annotationPath, "--out", outPath], opts);
  return loadParams(outPath);
}

export function generate(
  paramsPath: string,
  outPath: string,
  flags?: { extended?: boolean; capsuleTag?: boolean },
  opts?: ClientOptions,
): string {
  const args = ["generate", paramsPath, "--out", outPath];
  if (flags?.extended) args.push("--extended");
  if (flags?.capsuleTag) args.push("--capsule-tag");
  runCli(args, opts);
  return readFileSync(outPath, "utf-8");
}

export function leapVariants(
  basePath: string,
  outDir: string,
  minTotal = 0,
  opts?: ClientOptions,
): VariantManifest {
  return runJson<VariantManifest>(
    ["leap-variants", "--base", basePath, "--min-total", String(minTotal), "--out-dir", outDir],
    opts,
  );
}

function writeCsv(path: string, rows: number[][]): void {
  writeFileSync(path, rows.map((r) => r.join(",")).join("\n") + "\n");
}

function readCsv(path: string): number[][] {
  return readFileSync(path, "utf-8")
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => line.split(",").map(Number));
}

export function mapVectors(
  annotationPath: string,
  direction: "to-canonical" | "to-original",
  rows: number[][],
  opts?: ClientOptions,
): number[][] {
  const dir = mkdtempSync(join(tmpdir(), "canonhand-"));
  try {
    const inFile = join(dir, "in.csv");
    const outFile = join(dir, "out.csv");
    writeCsv(inFile, rows);
    runCli(
      ["map", "--annotation", annotationPath, "--direction", direction,
       "--in", inFile, "--out", outFile],
      opts,
    );
    return readCsv(outFile);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

export function fkFingertips(
  paramsPath: string,
  configs?: number[][],
  opts?: ClientOptions,
): Fingertips[] {
  if (!configs) {
    return runJson<{ configs: Fingertips[] }>(["fk", paramsPath], opts).configs;
  }
  const dir = mkdtempSync(join(tmpdir(), "canonhand-"));
  try {
    const csv = join(dir, "q.csv");
    writeCsv(csv, configs);
    return runJson<{ configs: Fingertips[] }>(
      ["fk", paramsPath, "--config", csv], opts).configs;
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

export function audit(
  urdfPath: string,
  annotationPath: string,
  paramsPath: string,
  n = 100,
  seed = 7,
  opts?: ClientOptions,
): FidelityReport {
  return runJson<FidelityReport>(
    ["audit", urdfPath, "--annotation", annotationPath, "--params", paramsPath,
     "--n", String(n), "--seed", String(seed)],
    opts,
  );
}

export function roundtrip(paramsPath: string, opts?: ClientOptions): RoundtripReport {
  return runJson<RoundtripReport>(["roundtrip", paramsPath], opts);
}

/** Encoded 66-float rows for n seeded samples, identical to `sample --json`. */
export function sampleRows(n: number, seed = 0, opts?: ClientOptions): number[][] {
  return runJson<{ rows: number[][] }>(
    ["sample", "--n", String(n), "--seed", String(seed)], opts).rows;
}

export function writeDataset(
  n: number,
  seed: number,
  outPath: string,
  rangesPath?: string,
  opts?: ClientOptions,
): DatasetManifest {
  const args = ["sample", "--n", String(n), "--seed", String(seed), "--out", outPath];
  if (rangesPath) args.push("--ranges", rangesPath);
  return runJson<DatasetManifest>(args, opts);
}

export interface Dataset {
  rows: number;
  dim: number;
  /** Row-major float32 values, rows * dim long. */
  data: Float32Array;
  manifest: DatasetManifest | null;
}

/** Read an f32 dataset file directly (little-endian), plus its sidecar. */
export function readDataset(path: string): Dataset {
  const buf = readFileSync(path);
  let manifest: DatasetManifest | null = null;
  try {
    manifest = JSON.parse(readFileSync(path + ".json", "utf-8")) as DatasetManifest;
  } catch {
    manifest = null;
  }
  const dim = manifest?.dim ?? VECTOR_DIM;
  if (buf.length % (4 * dim) !== 0) {
    throw new Error(`${path}: size ${buf.length} is not a whole number of rows`);
  }
  const count = buf.length / 4;
  const view = new DataView(buf.buffer, buf.byteOffset, buf.length);
  const data = new Float32Array(count);
  for (let i = 0; i < count; i++) {
    data[i] = view.getFloat32(i * 4, true);
  }
  return { rows: count / dim, dim, data, manifest };
}

export function datasetRow(ds: Dataset, k: number): Float32Array {
  if (k < 0 || k >= ds.rows) throw new RangeError(`row ${k} out of range`);
  return ds.data.subarray(k * ds.dim, (k + 1) * ds.dim);
}

export function loadParams(path: string): CanonicalParams {
  return JSON.parse(readFileSync(path, "utf-8")) as CanonicalParams;
}

export function saveParams(path: string, params: CanonicalParams): void {
  writeFileSync(path, JSON.stringify(params, null, 2) + "\n");
}

export function loadExtendedParams(path: string): ExtendedParams {
  return JSON.parse(readFileSync(path, "utf-8")) as ExtendedParams;
}
