/**
 * Binding-parity tests: everything the client returns must be byte-identical
 * to what the CLI itself produces, and the dataset reader must reproduce the
 * documented (n, 66) layout.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, describe, expect, it } from "vitest";

import {
  datasetRow,
  extract,
  fkFingertips,
  generate,
  inspect,
  leapVariants,
  loadParams,
  mapVectors,
  readDataset,
  roundtrip,
  runCli,
  sampleRows,
  writeDataset,
} from "../src/index.js";

const FIXTURES = resolve(__dirname, "../../fixtures");
const HANDS = ["shadow_hand", "allegro_hand", "leap_hand", "barrett_hand"];
const DOF: Record<string, number> = {
  shadow_hand: 22,
  allegro_hand: 16,
  leap_hand: 16,
  barrett_hand: 8,
};

const work = mkdtempSync(join(tmpdir(), "canonhand-client-"));
afterAll(() => rmSync(work, { recursive: true, force: true }));

function cliDirect(args: string[]): string {
  const res = spawnSync("canonhand", args, {
    encoding: "utf-8",
    maxBuffer: 256 * 1024 * 1024,
  });
  expect(res.status).toBe(0);
  return res.stdout;
}

describe("inspect", () => {
  it("reports the fixture DoF counts", () => {
    for (const hand of HANDS) {
      const info = inspect(join(FIXTURES, `${hand}.urdf`));
      expect(info.dof).toBe(DOF[hand]);
      expect(info.links).toBe(info.joints + 1);
    }
  });
});

describe("extract/generate parity", () => {
  it("extracts byte-identical parameter files on every fixture", () => {
    for (const hand of HANDS) {
      const viaClient = join(work, `${hand}.client.json`);
      const viaCli = join(work, `${hand}.cli.json`);
      const params = extract(
        join(FIXTURES, `${hand}.urdf`),
        join(FIXTURES, `${hand}.annotation.json`),
        viaClient,
      );
      cliDirect([
        "extract", join(FIXTURES, `${hand}.urdf`),
        "--annotation", join(FIXTURES, `${hand}.annotation.json`),
        "--out", viaCli,
      ]);
      expect(readFileSync(viaClient)).toEqual(readFileSync(viaCli));
      const active = params.joint_lowers.filter(
        (lo, i) => lo < params.joint_uppers[i]).length;
      expect(active).toBe(DOF[hand]);
    }
  });

  it("generates byte-identical URDFs for every fixture's parameters", () => {
    for (const hand of HANDS) {
      const paramsPath = join(work, `${hand}.client.json`);
      const a = join(work, `${hand}.a.urdf`);
      const b = join(work, `${hand}.b.urdf`);
      const text = generate(paramsPath, a);
      cliDirect(["generate", paramsPath, "--out", b]);
      expect(readFileSync(a)).toEqual(readFileSync(b));
      expect(text).toContain("palm");
    }
    expect(roundtrip(join(work, "shadow_hand.client.json")).ok).toBe(true);
  });

  it("generates extended variants through the same surface", () => {
    const outDir = join(work, "variants");
    const manifest = leapVariants(join(FIXTURES, "leap_extended.json"), outDir, 11);
    expect(manifest.count).toBe(5); // sums 11 and 12 over four 0..3 digits
    const byName = Object.fromEntries(manifest.variants.map((v) => [v.name, v.dof]));
    expect(byName["leap_3333"]).toBe(16);
  });
});

describe("encode parity", () => {
  it("sampleRows equals the CLI --json floats exactly", () => {
    const rows = sampleRows(3, 5);
    const direct = JSON.parse(cliDirect(["sample", "--n", "3", "--seed", "5", "--json"]));
    expect(rows).toEqual(direct.rows);
    expect(rows).toHaveLength(3);
    for (const row of rows) expect(row).toHaveLength(66);
  });
});

describe("action mapping", () => {
  it("round-trips vectors bitwise through CSV", () => {
    const ann = join(FIXTURES, "leap_hand.annotation.json");
    const rows = [
      Array.from({ length: 16 }, (_v, i) => Math.sin(i + 1) * 1.3),
      Array.from({ length: 16 }, (_v, i) => Math.cos(i) * -0.7),
    ];
    const canonical = mapVectors(ann, "to-canonical", rows);
    expect(canonical[0]).toHaveLength(22);
    const back = mapVectors(ann, "to-original", canonical);
    expect(back).toEqual(rows);
  });
});

describe("forward kinematics", () => {
  it("returns one fingertip per finger", () => {
    const paramsPath = join(work, "shadow_hand.client.json");
    const tips = fkFingertips(paramsPath);
    expect(Object.keys(tips[0].fingertips).sort()).toEqual(
      ["index", "little", "middle", "ring", "thumb"]);
    const params = loadParams(paramsPath);
    // zero config: index tip z = base z + summed non-thumb lengths
    const base = params.finger_xyz.slice(3, 6);
    const total = params.finger_lengths.slice(3).reduce((a, b) => a + b, 0);
    const tip = tips[0].fingertips.index;
    expect(tip[2]).toBeCloseTo(base[2] + total, 9);
  });
});

describe("dataset reader", () => {
  it("reads a 65536-row dataset as (65536, 66)", () => {
    const path = join(work, "hands.f32");
    const manifest = writeDataset(65536, 2024, path);
    expect(manifest.rows).toBe(65536);
    const ds = readDataset(path);
    expect(ds.rows).toBe(65536);
    expect(ds.dim).toBe(66);
    expect(ds.data.length).toBe(65536 * 66);
    expect(ds.manifest?.rng).toBe("pcg64_seedseq_v1");

    // spot-check: stored rows are the float32 cast of the sampled vectors
    const direct = sampleRows(2, 2024);
    const row0 = datasetRow(ds, 0);
    for (let i = 0; i < 66; i++) {
      expect(row0[i]).toBe(Math.fround(direct[0][i]));
    }
    for (const v of row0) expect(Number.isFinite(v)).toBe(true);
  }, 120000);
});
