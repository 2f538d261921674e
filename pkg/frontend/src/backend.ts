/**
 * Backend access for the UI server.
 *
 * The browser never talks to dealer/controller/node services directly; the
 * UI server resolves their URLs through the name registry's /graph view and
 * proxies every call.
 */
import type { AggregateState, GraphView } from './types.js';

export class BackendError extends Error {
  constructor(message: string, public readonly status?: number) {
    super(message);
  }
}

async function fetchJson<T>(url: string, init?: RequestInit): Promise<T> {
  let resp: Response;
  try {
    resp = await fetch(url, init);
  } catch (err) {
    throw new BackendError(`unreachable: ${String(err)}`);
  }
  if (!resp.ok) {
    throw new BackendError(`HTTP ${resp.status} from ${url}`, resp.status);
  }
  return (await resp.json()) as T;
}

export function postJson<T>(url: string, body: unknown): Promise<T> {
  return fetchJson<T>(url, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(body ?? {}),
  });
}

export class Backend {
  constructor(private readonly registryUrl: string) {}

  graph(): Promise<GraphView> {
    return fetchJson<GraphView>(`${this.registryUrl}/graph`);
  }

  /** URL of a named service, resolved through the registry. */
  async urlOf(name: string): Promise<string> {
    const graph = await this.graph();
    const url = graph.urls[name];
    if (!url) throw new BackendError(`registry has no URL for ${name}`);
    return url;
  }

  setRoute(body: unknown): Promise<unknown> {
    return postJson(`${this.registryUrl}/route`, body);
  }

  /**
   * One poll: the route graph plus every service's /state.  A service that
   * fails to answer gets an error slot; the rest of the poll still succeeds.
   */
  async aggregateState(): Promise<AggregateState> {
    const out: AggregateState = {
      graph: null,
      dealer: {},
      controllers: {},
      nodes: {},
    };
    let graph: GraphView;
    try {
      graph = await this.graph();
    } catch (err) {
      out.graphError = (err as Error).message;
      return out;
    }
    out.graph = graph;

    const polls = Object.entries(graph.urls)
      .filter(([name]) => name !== 'name-registry')
      .map(async ([name, url]) => {
        let slot;
        try {
          slot = { state: await fetchJson<never>(`${url}/state`) };
        } catch (err) {
          slot = { error: (err as Error).message };
        }
        if (name === 'dealer') out.dealer = slot;
        else if (name.startsWith('controller-')) out.controllers[name] = slot;
        else if (name.startsWith('node-')) out.nodes[name] = slot;
      });
    await Promise.all(polls);
    return out;
  }
}
