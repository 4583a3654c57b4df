// Login page: the only unauthenticated view.

import { banner } from "../render.js";

export function renderLogin(message?: string): string {
  return `
<div class="login-box">
  <h1>Unified University Inventory System</h1>
  ${message ? banner(message) : ""}
  <form id="login-form">
    <label class="field"><span>Username</span><input name="username" autofocus required /></label>
    <label class="field"><span>Password</span><input name="password" type="password" required /></label>
    <button type="submit">Sign in</button>
  </form>
</div>`;
}
