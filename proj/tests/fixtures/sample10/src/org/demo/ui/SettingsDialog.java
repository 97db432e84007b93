package org.demo.ui;

import org.demo.app.Settings;

/** Dialog that edits user settings such as theme and font. */
public class SettingsDialog {
    private final Settings settings;
    private String theme;
    private String font;

    public SettingsDialog(Settings settings) {
        this.settings = settings;
    }

    public void open() {
        theme = MenuAction.getSettingOrDefault(settings, "ui.theme", "light");
        font = MenuAction.getSettingOrDefault(settings, "ui.font", "monospace");
    }

    public void apply() {
        settings.store("ui.theme", theme);
        settings.store("ui.font", font);
    }

    public void setTheme(String theme) {
        this.theme = theme;
    }

    public void setFont(String font) {
        this.font = font;
    }
}
