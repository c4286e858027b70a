"""The seven activity-type test programs and their dispatcher."""

from __future__ import annotations

import random
import string
from typing import Callable

from screentest.activity import ActivityType
from screentest.features import ElementGroup
from screentest.hierarchy import ScreenSnapshot, UiElement
from screentest.lexicon import LexiconConfig, resolve
from screentest.scenarios.base import (
    ScenarioAborted,
    ScenarioConfig,
    ScenarioOutcome,
    Session,
    clickable_descendants,
    elements_in,
    left_screen,
    same_element,
)
from screentest.simdevice.device import Device, DeviceAction, ObservationKind
from screentest.simdevice.model import ActionKind

CLICK = ElementGroup.CLICKABLE
TEXT = ElementGroup.TEXT_FIELD
VSWIPE = ElementGroup.VERTICAL_SWIPEABLE
HSWIPE = ElementGroup.HORIZONTAL_SWIPEABLE

RANDOM_CREDENTIAL_LENGTH = 12
INVALID_RECIPIENT = "recipient.without.at.sign"
VALID_RECIPIENT = "bob@example.com"
BROWSER_URLS = ("https://example.com/first", "https://example.org/second")

# every check id a scenario can emit, used by reports and tests
CHECKS: dict[ActivityType, tuple[str, ...]] = {
    ActivityType.SPLASH: ("splash-stuck",),
    ActivityType.ADVERTISEMENT: ("ad-unclosable", "ad-escapes-app"),
    ActivityType.LOGIN: ("login-empty-bypass", "login-invalid-bypass", "login-valid-rejected"),
    ActivityType.PORTAL: ("portal-swipe", "portal-tabs", "portal-article"),
    ActivityType.MAIL: (
        "mail-open",
        "mail-scroll",
        "mail-send-empty-recipient",
        "mail-send-invalid-recipient",
        "mail-send-valid",
    ),
    ActivityType.BROWSER: (
        "browser-navigate",
        "browser-back",
        "browser-forward",
        "browser-home",
        "browser-new-tab",
    ),
    ActivityType.TODO_LIST: ("todo-add", "todo-toggle"),
}


def random_credential(rng: random.Random) -> str:
    alphabet = string.ascii_letters + string.digits
    return "".join(rng.choice(alphabet) for _ in range(RANDOM_CREDENTIAL_LENGTH))


# -- splash -------------------------------------------------------------------


def _splash(s: Session) -> None:
    s.begin("splash-stuck")
    obs = s.step(DeviceAction.wait(s.config.splash_timeout_ms))
    if left_screen(s.home, obs):
        return
    clickables = elements_in(s.home, CLICK)
    if len(clickables) > 1:
        s.skip("splash-stuck", f"{len(clickables)} clickable elements; no single way forward")
        return
    if clickables and left_screen(s.home, s.tap(clickables[0])):
        return
    s.finding("splash-stuck", f"screen did not advance within {s.config.splash_timeout_ms} ms")


# -- advertisement ------------------------------------------------------------


def _ad(s: Session) -> None:
    s.begin("ad-unclosable")
    s.begin("ad-escapes-app")
    close = s.find(s.home, "close", CLICK)
    if not close:
        s.finding("ad-unclosable", "no close element found on the advertisement")
        s.skip("ad-escapes-app", "nothing to close")
        return
    obs = s.tap(close[0])
    if obs.kind is ObservationKind.APP_EXITED or (
        obs.snapshot is not None and obs.snapshot.foreground_package != s.home.foreground_package
    ):
        s.finding("ad-escapes-app", "closing the advertisement left the application")
        s.skip("ad-unclosable", "application was left")
        return
    if not left_screen(s.home, obs):
        s.finding("ad-unclosable", "tapping the close element kept the advertisement on screen")


# -- login --------------------------------------------------------------------


def find_login_form(
    snap: ScreenSnapshot, lexicon: LexiconConfig
) -> tuple[UiElement, UiElement, UiElement] | None:
    """(username, password, submit) elements, or None when any is missing."""
    passwords = resolve(snap, "password_field", lexicon, TEXT)
    users = [u for u in resolve(snap, "username_field", lexicon, TEXT) if not passwords or u is not passwords[0]]
    submit = resolve(snap, "login_submit", lexicon, CLICK)
    if not (users and passwords and submit):
        return None
    return users[0], passwords[0], submit[0]


def _login_fields(s: Session, snap: ScreenSnapshot) -> tuple[UiElement, UiElement, UiElement] | None:
    return find_login_form(snap, s.config.lexicon)


def _login_attempt(s: Session, user: str | None, password: str | None) -> bool | None:
    """Fill the form and submit; True when the app advanced, None when fields vanished."""
    snap = s.reset()
    fields = _login_fields(s, snap)
    if fields is None:
        return None
    u, p, submit = fields
    if user is not None:
        s.type_into(u, user)
    if password is not None:
        s.type_into(p, password)
    return left_screen(snap, s.tap(submit))


def _login(s: Session) -> None:
    ids = CHECKS[ActivityType.LOGIN]
    for cid in ids:
        s.begin(cid)
    if _login_fields(s, s.home) is None:
        for cid in ids:
            s.skip(cid, "username, password or submit element not found")
        return
    rng = random.Random(s.config.seed)
    advanced = _login_attempt(s, None, None)
    if advanced:
        s.finding("login-empty-bypass", "submitting empty username and password advanced past the login screen")
    advanced = _login_attempt(s, random_credential(rng), random_credential(rng))
    if advanced:
        s.finding("login-invalid-bypass", "submitting random credentials advanced past the login screen")
    creds = s.config.credentials
    if creds is None:
        s.skip("login-valid-rejected", "no credentials configured")
        return
    advanced = _login_attempt(s, creds.username, creds.password)
    if advanced is False:
        s.finding("login-valid-rejected", "valid credentials did not advance past the login screen")


# -- portal -------------------------------------------------------------------


def _portal(s: Session) -> None:
    s.begin("portal-swipe")
    pagers = elements_in(s.home, HSWIPE)
    if not pagers:
        s.skip("portal-swipe", "no horizontally swipeable element")
    else:
        snap = s.reset()
        pager = max(elements_in(snap, HSWIPE), key=lambda e: e.bounds.area)
        left = s.step(DeviceAction.at(ActionKind.SWIPE_LEFT, pager))
        right = s.step(DeviceAction.at(ActionKind.SWIPE_RIGHT, pager)) if s.device.live else left
        if not (left.changed and right.changed):
            s.finding("portal-swipe", "swiping left and right did not change the shown section")

    s.begin("portal-tabs")
    tabs = s.find(s.home, "tab_item", CLICK)
    if len(tabs) < 2:
        s.skip("portal-tabs", "fewer than two tab elements")
    else:
        snap = s.reset()
        renderings = []
        for tab in tabs:
            live = same_element(snap, tab) or tab
            obs = s.tap(live)
            if obs.snapshot is None:
                break
            snap = obs.snapshot
            renderings.append(snap)
        if len(set(renderings)) != len(tabs):
            s.finding("portal-tabs", f"tapping {len(tabs)} tabs showed {len(set(renderings))} distinct sections")

    s.begin("portal-article")
    articles = s.find(s.home, "article_item", CLICK)
    if not articles:
        s.skip("portal-article", "no article element")
    else:
        snap = s.reset()
        if not left_screen(snap, s.tap(articles[0])):
            s.finding("portal-article", "tapping an article did not open it")


# -- mail ---------------------------------------------------------------------


def _inbox_items(snap: ScreenSnapshot) -> list[UiElement]:
    lists = elements_in(snap, VSWIPE)
    return clickable_descendants(lists[0]) if lists else []


def _open_compose(s: Session) -> tuple[UiElement, UiElement, ScreenSnapshot] | None:
    snap = s.reset()
    compose = s.find(snap, "compose", CLICK)
    if not compose:
        return None
    obs = s.tap(compose[0])
    if not left_screen(snap, obs) or obs.snapshot is None:
        return None
    form = obs.snapshot
    recipient = s.find(form, "recipient_field", TEXT)
    send = s.find(form, "send", CLICK)
    if not (recipient and send):
        return None
    return recipient[0], send[0], form


def _send(s: Session, recipient: str | None) -> bool | None:
    opened = _open_compose(s)
    if opened is None:
        return None
    to, send, form = opened
    if recipient is not None:
        s.type_into(to, recipient)
        for role, text in (("subject_field", "Status"), ("body_field", "Everything is on track.")):
            fields = s.find(form, role, TEXT)
            if fields:
                s.type_into(fields[0], text)
    return left_screen(form, s.tap(send))


def _mail(s: Session) -> None:
    rng = random.Random(s.config.seed)
    s.begin("mail-open")
    s.begin("mail-scroll")
    items = _inbox_items(s.home)
    if not items:
        s.skip("mail-open", "no inbox list with clickable items")
        s.skip("mail-scroll", "no message to open")
    else:
        snap = s.reset()
        pick = rng.randrange(len(items))
        item = _inbox_items(snap)[pick]
        obs = s.tap(item)
        if not left_screen(snap, obs) or obs.snapshot is None:
            s.finding("mail-open", "tapping an inbox item did not open the message")
            s.skip("mail-scroll", "message did not open")
        else:
            content = elements_in(obs.snapshot, VSWIPE)
            if not content:
                s.skip("mail-scroll", "opened message has no scrollable content")
            elif not s.step(DeviceAction.at(ActionKind.SWIPE_UP, content[0])).changed:
                s.finding("mail-scroll", "scrolling the opened message did not move its content")

    checks = (
        ("mail-send-empty-recipient", None, True, "message was sent with an empty recipient"),
        ("mail-send-invalid-recipient", INVALID_RECIPIENT, True, "message was sent to a malformed address"),
        ("mail-send-valid", VALID_RECIPIENT, False, "a valid message could not be sent"),
    )
    for cid, recipient, must_block, bad in checks:
        s.begin(cid)
        sent = _send(s, recipient)
        if sent is None:
            s.skip(cid, "compose, recipient or send element not found")
        elif sent == must_block:
            s.finding(cid, bad)


# -- browser ------------------------------------------------------------------


def _url_text(s: Session, url_bar: UiElement) -> str | None:
    snap = s.current()
    if snap is None:
        return None
    el = same_element(snap, url_bar)
    return None if el is None else el.text


def _browser(s: Session) -> None:
    ids = CHECKS[ActivityType.BROWSER]
    for cid in ids:
        s.begin(cid)
    bars = s.find(s.home, "url_bar", TEXT)
    if not bars:
        for cid in ids:
            s.skip(cid, "no url bar found")
        return
    snap = s.reset()
    bar = same_element(snap, bars[0]) or bars[0]
    home_url = bar.text
    first, second = BROWSER_URLS
    s.type_into(bar, first)
    shown_first = _url_text(s, bar)
    s.type_into(bar, second)
    shown_second = _url_text(s, bar)
    if (shown_first, shown_second) != (first, second):
        s.finding("browser-navigate", "typing an address into the url bar did not load it")
        for cid in ids[1:4]:
            s.skip(cid, "navigation failed")
    else:
        for cid, role, expected in (
            ("browser-back", "nav_back", first),
            ("browser-forward", "nav_forward", second),
            ("browser-home", "nav_home", home_url),
        ):
            snap = s.current()
            buttons = s.find(snap, role, CLICK) if snap is not None else []
            if not buttons:
                s.skip(cid, f"no {role} element")
                continue
            s.tap(buttons[0])
            shown = _url_text(s, bar)
            if shown != expected:
                s.finding(cid, f"expected page {expected!r} after {role}, saw {shown!r}")
    snap = s.reset()
    tabs = s.find(snap, "new_tab", CLICK)
    if not tabs:
        s.skip("browser-new-tab", "no new-tab element")
    elif not s.tap(tabs[0]).changed:
        s.finding("browser-new-tab", "tapping new tab did not open a tab")


# -- to-do list ---------------------------------------------------------------


def _todo(s: Session) -> None:
    s.begin("todo-add")
    s.begin("todo-toggle")
    snap = s.reset()
    adders = s.find(snap, "add_task", CLICK)
    lists = elements_in(snap, VSWIPE)
    if not adders or not lists:
        s.skip("todo-add", "no add-task element or task list")
        s.skip("todo-toggle", "no task list")
        return
    before = clickable_descendants(lists[0])
    obs = s.tap(adders[0])
    after_lists = elements_in(obs.snapshot, VSWIPE) if obs.snapshot is not None else []
    after = clickable_descendants(after_lists[0]) if after_lists else []
    if len(after) <= len(before):
        s.finding("todo-add", "adding a task did not add an entry to the list")
        s.skip("todo-toggle", "no new task to toggle")
        return
    known = {(e.resource_id, e.bounds) for e in before}
    fresh = [e for e in after if (e.resource_id, e.bounds) not in known] or after[-1:]
    if not s.tap(fresh[0]).changed:
        s.finding("todo-toggle", "checking a task did not mark it as done")


PROGRAMS: dict[ActivityType, Callable[[Session], None]] = {
    ActivityType.SPLASH: _splash,
    ActivityType.ADVERTISEMENT: _ad,
    ActivityType.LOGIN: _login,
    ActivityType.PORTAL: _portal,
    ActivityType.MAIL: _mail,
    ActivityType.BROWSER: _browser,
    ActivityType.TODO_LIST: _todo,
}


def run_scenario(kind: ActivityType, device: Device, config: ScenarioConfig | None = None) -> ScenarioOutcome:
    """Run the test program for ``kind`` against the screen the device is showing."""
    cfg = config or ScenarioConfig()
    s = Session(device, kind, cfg)
    try:
        PROGRAMS[kind](s)
    except ScenarioAborted:
        pass
    done = {f.check_id for f in s.findings}
    s.inconclusive = [(c, r) for c, r in s.inconclusive if c not in done]
    return s.outcome()


def _runner(kind: ActivityType):
    def run(device: Device, config: ScenarioConfig | None = None) -> ScenarioOutcome:
        return run_scenario(kind, device, config)

    run.__name__ = f"{kind.name.lower()}_scenario"
    run.__doc__ = f"Run the {kind.value} checks: {', '.join(CHECKS[kind])}."
    return run


splash_scenario = _runner(ActivityType.SPLASH)
ad_scenario = _runner(ActivityType.ADVERTISEMENT)
login_scenario = _runner(ActivityType.LOGIN)
portal_scenario = _runner(ActivityType.PORTAL)
mail_scenario = _runner(ActivityType.MAIL)
browser_scenario = _runner(ActivityType.BROWSER)
todo_scenario = _runner(ActivityType.TODO_LIST)


def all_checks() -> list[str]:
    return [c for kind in ActivityType for c in CHECKS[kind]]


__all__ = [
    "CHECKS",
    "PROGRAMS",
    "ad_scenario",
    "all_checks",
    "browser_scenario",
    "find_login_form",
    "login_scenario",
    "mail_scenario",
    "portal_scenario",
    "random_credential",
    "run_scenario",
    "splash_scenario",
    "todo_scenario",
]
