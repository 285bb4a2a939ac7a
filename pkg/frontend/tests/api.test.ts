import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiError, LandsigApi } from "../src/api.js";
import { FakeService } from "./fake_service.js";

describe("api client", () => {
  let service: FakeService;
  let api: LandsigApi;

  beforeEach(() => {
    service = new FakeService();
    vi.stubGlobal("fetch", service.fetch);
    api = new LandsigApi("http://svc");
  });

  afterEach(() => vi.unstubAllGlobals());

  it("lists datasets", async () => {
    const datasets = await api.getDatasets();
    expect(datasets).toHaveLength(1);
    expect(datasets[0]!.name).toBe("testcity");
    expect(service.calls[0]).toMatchObject({ method: "GET", path: "/datasets" });
  });

  it("opens, revises, and finalizes sessions with the documented routes", async () => {
    const bbox = { lat_min: -27.48, lat_max: -27.46, lon_min: 153.01, lon_max: 153.03 };
    const session = await api.openSession("testcity", bbox);
    expect(session.complete).toBe(true);

    const revised = await api.reviseSession(session.session_id, bbox);
    expect(revised.history).toHaveLength(1);

    const done = await api.finalizeSession(session.session_id, "accept");
    expect(done.status).toBe("accepted");
    expect(done.cluster?.bbox).toEqual(bbox);

    expect(service.calls.map((c) => `${c.method} ${c.path}`)).toEqual([
      "POST /sessions",
      `PATCH /sessions/${session.session_id}`,
      `POST /sessions/${session.session_id}/finalize`,
    ]);
  });

  it("surfaces the wire error code", async () => {
    await expect(api.getSession("nope")).rejects.toMatchObject({ code: "NotFound" });
    const degenerate = { lat_min: 1, lat_max: 1, lon_min: 0, lon_max: 1 };
    await expect(api.openSession("testcity", degenerate)).rejects.toMatchObject({
      code: "BadRequest",
    });
  });

  it("wraps network failures as IoError", async () => {
    vi.stubGlobal("fetch", () => Promise.reject(new Error("refused")));
    const offline = new LandsigApi("http://down");
    const err = await offline.getDatasets().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("IoError");
  });
});
