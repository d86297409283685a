/** Test scaffolding: committed contract fixtures captured from the real
 * backend, and a fixture server that answers the client's fetches from
 * canned payloads (responses queue per route; the last one repeats). */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { ApiClient, type FetchLike } from "../src/api.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, `${name}.json`), "utf8")) as T;
}

interface Recorded {
  method: string;
  path: string;
  body: unknown;
}

export class FixtureServer {
  private routes = new Map<string, unknown[]>();
  readonly calls: Recorded[] = [];

  on(method: string, path: string, ...payloads: unknown[]): this {
    this.routes.set(`${method} ${path}`, payloads);
    return this;
  }

  fetch: FetchLike = async (url, init) => {
    const method = (init?.method ?? "GET").toUpperCase();
    const path = url.toString();
    let body: unknown = null;
    if (typeof init?.body === "string") {
      body = JSON.parse(init.body);
    } else if (init?.body instanceof FormData) {
      body = init.body;
    }
    this.calls.push({ method, path, body });
    const queue = this.routes.get(`${method} ${path}`);
    if (!queue || queue.length === 0) {
      return new Response(
        JSON.stringify({ code: "NotFound", message: `no fixture for ${method} ${path}` }),
        { status: 404, headers: { "content-type": "application/json" } },
      );
    }
    const payload = queue.length > 1 ? queue.shift() : queue[0];
    return new Response(JSON.stringify(payload), {
      status: 200,
      headers: { "content-type": "application/json" },
    });
  };

  client(): ApiClient {
    return new ApiClient("", this.fetch);
  }
}
