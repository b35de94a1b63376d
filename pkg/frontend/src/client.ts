// WebSocket session client with capped-backoff reconnect. Message handling is
// factored into handleText so tests can drive it without sockets.

import { InputSample } from "./input.js";
import { commandMessage, inputMessage, parseServerMessage } from "./protocol.js";
import { ViewState } from "./view.js";

export type ClientOptions = {
  onChange?: () => void;
  socketFactory?: (url: string) => WebSocket;
};

export class SessionClient {
  private ws: WebSocket | null = null;
  private closed = false;
  private retryMs = 1000;

  constructor(
    readonly url: string,
    readonly view: ViewState,
    private readonly opts: ClientOptions = {},
  ) {}

  connect(): void {
    this.closed = false;
    this.open();
  }

  private open(): void {
    const factory = this.opts.socketFactory ?? ((url: string) => new WebSocket(url));
    const ws = factory(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.retryMs = 1000;
      this.view.connected = true;
      this.opts.onChange?.();
    };
    ws.onmessage = (ev: MessageEvent) => {
      if (typeof ev.data === "string") this.handleText(ev.data);
    };
    ws.onclose = () => {
      this.view.connected = false;
      this.opts.onChange?.();
      if (!this.closed) {
        setTimeout(() => this.open(), this.retryMs);
        this.retryMs = Math.min(this.retryMs * 2, 8000);
      }
    };
    ws.onerror = () => {
      // onclose drives the reconnect
    };
  }

  handleText(text: string): void {
    const msg = parseServerMessage(text);
    if (msg === null) return;
    this.view.applyMessage(msg);
    this.opts.onChange?.();
  }

  // Inputs are stamped with the latest known sim time; the session applies
  // them at the next tick boundary and the delay line does the rest.
  sendInput(sample: InputSample): void {
    const t = this.view.state?.t ?? 0;
    this.sendText(JSON.stringify(inputMessage(t, sample.jx, sample.jy, sample.trigger)));
  }

  command(name: string, mode?: string): void {
    this.sendText(JSON.stringify(commandMessage(name, mode)));
  }

  requestCostmap(): void {
    this.sendText(JSON.stringify({ v: 1, type: "get_costmap" }));
  }

  private sendText(text: string): void {
    const OPEN = 1;   // WebSocket.OPEN without touching the global
    if (this.ws && this.ws.readyState === OPEN) {
      this.ws.send(text);
    }
  }

  close(): void {
    this.closed = true;
    this.ws?.close();
  }
}

export function sessionUrl(params: URLSearchParams, location: { hostname: string }): string {
  const host = params.get("host") ?? location.hostname ?? "127.0.0.1";
  const port = params.get("port") ?? "8765";
  return `ws://${host}:${port}/ws`;
}
