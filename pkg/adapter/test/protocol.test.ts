import { describe, expect, it } from "vitest";

import { answer } from "../src/serve.js";
import { StubModelState, infer } from "../src/stub.js";

function store(epochs: number[], pairs = [{ question: "what is the surname of bob tanner?", query: "GOLD" }]) {
  const byEpoch = new Map<number, StubModelState>();
  for (const epoch of epochs) {
    byEpoch.set(epoch, { kind: "stub-retrieval", epoch, pairs });
  }
  return { epochs, byEpoch };
}

describe("protocol answers", () => {
  it("echoes the id and produces a query", () => {
    const response = answer(store([5]), { id: "q1", question: "surname of bob tanner", epoch: 5 });
    expect(response).toEqual({ id: "q1", query: "GOLD" });
  });

  it("reports unknown epochs as protocol errors", () => {
    const response = answer(store([5, 10]), { id: "q1", question: "x", epoch: 7 });
    expect(response).toEqual({ id: "q1", error: "no checkpoint for epoch 7" });
  });

  it("routes to the latest checkpoint without an epoch field", () => {
    const byEpoch = store([5, 10]);
    byEpoch.byEpoch.get(10)!.pairs = [{ question: "anything", query: "LATEST" }];
    const response = answer(byEpoch, { id: "q2", question: "anything" });
    expect(response).toEqual({ id: "q2", query: "LATEST" });
  });

  it("echoes ids faithfully under many sequential requests", () => {
    const s = store([5]);
    for (let i = 0; i < 100; i++) {
      const response = answer(s, { id: `q${i}`, question: "bob tanner", epoch: 5 });
      expect(response.id).toBe(`q${i}`);
    }
  });

  it("turns malformed requests into error responses", () => {
    expect(answer(store([5]), { question: "no id" })).toHaveProperty("error");
    expect(answer(store([5]), { id: "q1" })).toEqual({ id: "q1", error: "request without question" });
    expect(answer(store([5]), { id: "q1", question: "x", epoch: "five" })).toHaveProperty("error");
  });

  it("an empty checkpoint answers with an error, not a crash", () => {
    const empty = store([5], []);
    const response = answer(empty, { id: "q1", question: "x", epoch: 5 });
    expect(response).toHaveProperty("error");
  });
});

describe("stub inference", () => {
  const state: StubModelState = {
    kind: "stub-retrieval",
    epoch: 5,
    pairs: [
      { question: "What is the surname of Anne Miller?", query: "Q_ANNE" },
      { question: "What is the email address of Anne Miller?", query: "Q_EMAIL" },
    ],
  };

  it("returns the memorized query for an exact question", () => {
    expect(infer(state, "What is the surname of Anne Miller?")).toBe("Q_ANNE");
  });

  it("prefers higher token overlap", () => {
    expect(infer(state, "Tell me the email address of Anne Miller")).toBe("Q_EMAIL");
  });

  it("breaks ties toward the earliest memorized pair", () => {
    expect(infer(state, "zzz")).toBe("Q_ANNE");
  });
});
