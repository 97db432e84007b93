package org.demo.ui;

import org.demo.app.Settings;

/** A menu action with a label, a shortcut and an enabled state. */
public class MenuAction {
    private final String label;
    private final String shortcut;
    private boolean enabled = true;

    public MenuAction(String label, String shortcut) {
        this.label = label;
        this.shortcut = shortcut;
    }

    public String getLabel() {
        return label;
    }

    public String getShortcut() {
        return shortcut;
    }

    public boolean isEnabled() {
        return enabled;
    }

    public void setEnabled(boolean enabled) {
        this.enabled = enabled;
    }

    public static String getSettingOrDefault(Settings settings, String key, String fallback) {
        String value = settings.lookup(key);
        if (value == null || value.isEmpty()) {
            return fallback;
        }
        return value;
    }

    public void perform(Settings settings) {
        String mode = getSettingOrDefault(settings, "menu.mode", "normal");
        System.out.println(label + " performed in " + mode + " mode");
    }
}
