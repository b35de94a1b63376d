import { describe, expect, it } from "vitest";

import { SessionClient, sessionUrl } from "../src/client.js";
import { ViewState } from "../src/view.js";

describe("SessionClient message handling", () => {
  it("feeds parsed frames into the view and notifies", () => {
    const view = new ViewState();
    let changes = 0;
    const client = new SessionClient("ws://test", view, { onChange: () => changes++ });
    client.handleText('{"v":1,"type":"hello","role":"driver"}');
    client.handleText(JSON.stringify({
      v: 1, type: "state", tick: 1, t: 0.05,
      pose: { x: 0, y: 0, theta: 0 }, u: { v: 0, omega: 0 },
      joystick: { jx: 0, jy: 0, trigger: false }, path: [],
      filter: null, sensed: [], radiation: 0, cum_radiation: 0,
      done: false, timed_out: false,
    }));
    expect(view.role).toBe("driver");
    expect(view.state!.tick).toBe(1);
    expect(changes).toBe(2);
  });

  it("ignores malformed frames instead of throwing", () => {
    const view = new ViewState();
    const client = new SessionClient("ws://test", view, {});
    expect(() => client.handleText("garbage")).not.toThrow();
    expect(view.state).toBeNull();
  });
});

describe("sessionUrl", () => {
  it("defaults to the page host and port 8765", () => {
    const url = sessionUrl(new URLSearchParams(""), { hostname: "robot.local" });
    expect(url).toBe("ws://robot.local:8765/ws");
  });

  it("honors host and port query parameters", () => {
    const url = sessionUrl(new URLSearchParams("?host=10.0.0.2&port=9999"),
                           { hostname: "ignored" });
    expect(url).toBe("ws://10.0.0.2:9999/ws");
  });
});
