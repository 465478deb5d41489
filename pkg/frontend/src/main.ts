import { NodeApi } from "./api";
import { mount } from "./ui";

const params = new URLSearchParams(window.location.search);
const nodeUrl = params.get("node") ?? "http://127.0.0.1:8545";
const root = document.getElementById("root");
if (!root) throw new Error("missing #root");
mount(root, new NodeApi(nodeUrl));
